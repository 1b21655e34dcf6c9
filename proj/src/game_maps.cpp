#include "shoga/game_maps.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "shoga/subset_transforms.hpp"

namespace shoga {

TuGame shoga_game(const TuGame& u) {
  const std::uint32_t full = u.grand().mask();
  std::vector<double> w(u.table_size());
  for (std::uint32_t s = 0; s <= full; ++s)
    w[s] = 0.5 * (u.grand_worth() - u.worth(full ^ s) + u.worth(s));
  return TuGame(u.players(), std::move(w));
}

TuGame shoga_scaled(const TuGame& u) {
  const double scale = std::ldexp(1.0, -(u.players() - 1));
  TuGame c = shoga_game(u);
  std::vector<double> w(c.table().begin(), c.table().end());
  for (double& x : w) x *= scale;
  return TuGame(u.players(), std::move(w));
}

TuGame dual(const TuGame& u) {
  const std::uint32_t full = u.grand().mask();
  std::vector<double> w(u.table_size());
  for (std::uint32_t s = 0; s <= full; ++s) w[s] = u.grand_worth() - u.worth(full ^ s);
  return TuGame(u.players(), std::move(w));
}

TuGame anti_dual(const TuGame& u) {
  TuGame d = dual(u);
  std::vector<double> w(d.table().begin(), d.table().end());
  for (double& x : w) x = -x;
  return TuGame(u.players(), std::move(w));
}

TuGame zero_normalization(const TuGame& u) {
  std::vector<double> w(u.table_size());
  for (std::uint32_t s = 0; s < u.table_size(); ++s) {
    double singles = 0.0;
    for (std::uint32_t m = s; m != 0; m &= m - 1) singles += u.worth(m & -m);
    w[s] = u.worth(s) - singles;
  }
  return TuGame(u.players(), std::move(w));
}

TuGame mobius(const TuGame& u) {
  std::vector<double> w(u.table().begin(), u.table().end());
  subset_sum_inv_in_place(w, u.players());
  return TuGame(u.players(), std::move(w));
}

TuGame synergy(const TuGame& u) {
  std::vector<double> w(u.table().begin(), u.table().end());
  subset_sum_in_place(w, u.players());
  return TuGame(u.players(), std::move(w));
}

TuGame hamiache(const TuGame& u, double t) {
  const int n = u.players();
  std::vector<double> w(u.table_size());
  for (std::uint32_t s = 0; s < u.table_size(); ++s) {
    double gain = 0.0;
    for (int j = 0; j < n; ++j) {
      const std::uint32_t bit = 1u << j;
      if (s & bit) continue;
      gain += u.worth(s | bit) - u.worth(s) - u.worth(bit);
    }
    w[s] = u.worth(s) + t * gain;
  }
  w[0] = 0.0;
  return TuGame(n, std::move(w));
}

namespace {

// (t-1)!(m-t)!/m! for 1 <= t <= m, via the multiplicative recurrence.
std::vector<double> potential_coefficients(int m) {
  std::vector<double> c(m + 1, 0.0);
  c[1] = 1.0 / m;
  for (int t = 2; t <= m; ++t) c[t] = c[t - 1] * (t - 1) / (m - t + 1);
  return c;
}

}  // namespace

double potential(const TuGame& u) {
  const auto coeff = potential_coefficients(u.players());
  double p = 0.0;
  for (std::uint32_t s = 1; s < u.table_size(); ++s)
    p += coeff[std::popcount(s)] * u.worth(s);
  return p;
}

TuGame potential_map(const TuGame& u) {
  const int n = u.players();
  std::vector<std::vector<double>> coeff(n + 1);
  for (int m = 1; m <= n; ++m) coeff[m] = potential_coefficients(m);
  std::vector<double> w(u.table_size(), 0.0);
  for (std::uint32_t s = 1; s < u.table_size(); ++s) {
    const int m = std::popcount(s);
    double p = 0.0;
    for_each_submask(s, [&](std::uint32_t t) {
      if (t != 0) p += coeff[m][std::popcount(t)] * u.worth(t);
    });
    w[s] = p;
  }
  return TuGame(n, std::move(w));
}

bool kernel_membership(const TuGame& u, double tol) {
  const std::uint32_t full = u.grand().mask();
  for (std::uint32_t s = 0; s <= full; ++s)
    if (std::abs(u.worth(s) - u.worth(full ^ s)) > tol) return false;
  return true;
}

GameMap make_game_map(const std::string& name) {
  if (name == "shoga") return {name, [](const TuGame& u) { return shoga_game(u); }};
  if (name == "shoga-scaled") return {name, [](const TuGame& u) { return shoga_scaled(u); }};
  if (name == "dual") return {name, [](const TuGame& u) { return dual(u); }};
  if (name == "anti-dual") return {name, [](const TuGame& u) { return anti_dual(u); }};
  if (name == "zero-norm") return {name, [](const TuGame& u) { return zero_normalization(u); }};
  if (name == "mobius") return {name, [](const TuGame& u) { return mobius(u); }};
  if (name == "synergy") return {name, [](const TuGame& u) { return synergy(u); }};
  if (name == "potential") return {name, [](const TuGame& u) { return potential_map(u); }};
  if (name.rfind("hamiache:", 0) == 0) {
    std::size_t used = 0;
    double t = 0.0;
    const std::string arg = name.substr(9);
    try {
      t = std::stod(arg, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad hamiache parameter: '" + arg + "'");
    }
    if (used != arg.size()) throw std::invalid_argument("bad hamiache parameter: '" + arg + "'");
    return {name, [t](const TuGame& u) { return hamiache(u, t); }};
  }
  throw std::invalid_argument("unknown game map: '" + name + "'");
}

std::vector<std::string> game_map_names() {
  return {"shoga",   "shoga-scaled", "dual",        "anti-dual",
          "zero-norm", "mobius",     "synergy",     "hamiache:<t>",
          "potential"};
}

const char* axiom_name(Axiom a) {
  switch (a) {
    case Axiom::kAvEff: return "AvEFF";
    case Axiom::kEff: return "EFF";
    case Axiom::kNll: return "NLL";
    case Axiom::kBlt: return "BLT";
    case Axiom::kCs: return "CS";
    case Axiom::kLin: return "LIN";
  }
  return "?";
}

std::optional<Axiom> parse_axiom(const std::string& name) {
  if (name == "AvEFF") return Axiom::kAvEff;
  if (name == "EFF") return Axiom::kEff;
  if (name == "NLL") return Axiom::kNll;
  if (name == "BLT") return Axiom::kBlt;
  if (name == "CS") return Axiom::kCs;
  if (name == "LIN") return Axiom::kLin;
  return std::nullopt;
}

namespace {

void record(AxiomReport& report, const TuGame& game, Coalition s, double residual, double tol) {
  report.max_residual = std::max(report.max_residual, residual);
  if (residual > tol && report.pass) {
    report.pass = false;
    report.witness = AxiomWitness{game, std::nullopt, 0.0, 0.0, s, residual};
  }
}

double uniform_pm1(std::mt19937_64& eng) {
  return 2.0 * (static_cast<double>(eng() >> 11) * 0x1.0p-53) - 1.0;
}

}  // namespace

AxiomReport check_axiom(const GameMap& map, Axiom axiom, std::span<const TuGame> suite,
                        double tol, std::uint64_t lin_seed) {
  if (suite.empty()) throw std::invalid_argument("check_axiom: empty suite");
  const int n = suite.front().players();
  for (const TuGame& g : suite)
    if (g.players() != n) throw std::invalid_argument("check_axiom: mixed player counts in suite");

  AxiomReport report;
  report.axiom = axiom;
  const std::uint32_t full = Coalition::full(n).mask();

  if (axiom == Axiom::kLin) {
    std::mt19937_64 eng(lin_seed);
    for (int draw = 0; draw < 32; ++draw) {
      const TuGame& u = suite[eng() % suite.size()];
      const TuGame& v = suite[eng() % suite.size()];
      const double a = uniform_pm1(eng);
      const double b = uniform_pm1(eng);
      const TuGame lhs = map.apply(linear_combination(a, u, b, v));
      const TuGame gu = map.apply(u);
      const TuGame gv = map.apply(v);
      for (std::uint32_t s = 0; s <= full; ++s) {
        const double residual = std::abs(lhs.worth(s) - (a * gu.worth(s) + b * gv.worth(s)));
        report.max_residual = std::max(report.max_residual, residual);
        if (residual > tol && report.pass) {
          report.pass = false;
          report.witness = AxiomWitness{u, v, a, b, Coalition(s), residual};
        }
      }
    }
    return report;
  }

  if (axiom == Axiom::kNll && n > 12)
    throw std::invalid_argument("check_axiom: NLL null-coalition scan limited to n <= 12");

  for (const TuGame& u : suite) {
    const TuGame gu = map.apply(u);
    switch (axiom) {
      case Axiom::kAvEff:
      case Axiom::kEff: {
        double total = 0.0;
        for (std::uint32_t s = 0; s <= full; ++s) total += gu.worth(s);
        const double target = axiom == Axiom::kAvEff
                                  ? std::ldexp(u.grand_worth(), n - 1)
                                  : u.grand_worth();
        record(report, u, u.grand(), std::abs(total - target), tol);
        break;
      }
      case Axiom::kNll:
        for (std::uint32_t s = 0; s <= full; ++s)
          if (is_null_coalition(u, Coalition(s)))
            record(report, u, Coalition(s), std::abs(gu.worth(s)), tol);
        break;
      case Axiom::kBlt:
        for (std::uint32_t s = 0; s <= full; ++s)
          if (is_bilateral_coalition(u, Coalition(s)))
            record(report, u, Coalition(s),
                   std::abs(gu.worth(s) - gu.worth(full ^ s)), tol);
        break;
      case Axiom::kCs:
        for (std::uint32_t s = 0; s <= full; ++s)
          record(report, u, Coalition(s),
                 std::abs(gu.worth(s) + gu.worth(full ^ s) - gu.grand_worth()), tol);
        break;
      default:
        break;
    }
  }
  return report;
}

BasisCheckReport verify_uniqueness_on_basis(int n) {
  if (n < 1 || n > 10)
    throw std::invalid_argument("verify_uniqueness_on_basis: n must be in [1, 10]");
  BasisCheckReport report{n};
  const std::uint32_t full = Coalition::full(n).mask();
  for (std::uint32_t s = 1; s <= full; ++s) {
    const TuGame image = shoga_game(unanimity_game(n, Coalition(s)));
    for (std::uint32_t t = 0; t <= full; ++t) {
      double expected;
      if ((t & s) == 0)
        expected = 0.0;
      else if ((t & s) == s)
        expected = 1.0;
      else
        expected = 0.5;
      ++report.cases_checked;
      if (image.worth(t) != expected) ++report.failures;
    }
  }
  return report;
}

}  // namespace shoga
