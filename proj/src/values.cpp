#include "shoga/values.hpp"

#include <cmath>
#include <stdexcept>

namespace shoga {

namespace {

// s!(n-s-1)!/n! for 0 <= s <= n-1, via the multiplicative recurrence.
std::vector<double> shapley_coefficients(int n) {
  std::vector<double> w(n, 0.0);
  w[0] = 1.0 / n;
  for (int s = 1; s < n; ++s) w[s] = w[s - 1] * s / (n - s);
  return w;
}

}  // namespace

ProbabilisticWeights::ProbabilisticWeights(int n, std::vector<std::vector<double>> tables)
    : n_(n), tables_(std::move(tables)) {
  if (n < 1 || n > kMaxPlayers) throw std::invalid_argument("weights: bad player count");
  if (tables_.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("weights: expected one table per player");
  const std::uint32_t size = 1u << n;
  for (int i = 0; i < n; ++i) {
    if (tables_[i].size() != size)
      throw std::invalid_argument("weights: table of player " + std::to_string(i + 1) +
                                  " has the wrong size");
    double total = 0.0;
    for (std::uint32_t s = 0; s < size; ++s) {
      if (s & (1u << i)) {
        if (tables_[i][s] != 0.0)
          throw std::invalid_argument("weights: player " + std::to_string(i + 1) +
                                      " carries weight on a coalition containing itself");
        continue;
      }
      total += tables_[i][s];
    }
    if (std::abs(total - 1.0) > kExactTol)
      throw std::invalid_argument("weights of player " + std::to_string(i + 1) +
                                  " sum to " + std::to_string(total) + ", expected 1");
  }
}

ProbabilisticWeights ProbabilisticWeights::shapley(int n) {
  const auto coeff = shapley_coefficients(n);
  std::vector<std::vector<double>> tables(n, std::vector<double>(std::size_t{1} << n, 0.0));
  for (int i = 0; i < n; ++i)
    for (std::uint32_t s = 0; s < (1u << n); ++s)
      if (!(s & (1u << i))) tables[i][s] = coeff[std::popcount(s)];
  return ProbabilisticWeights(n, std::move(tables));
}

ProbabilisticWeights ProbabilisticWeights::banzhaf(int n) {
  const double w = std::ldexp(1.0, -(n - 1));
  std::vector<std::vector<double>> tables(n, std::vector<double>(std::size_t{1} << n, 0.0));
  for (int i = 0; i < n; ++i)
    for (std::uint32_t s = 0; s < (1u << n); ++s)
      if (!(s & (1u << i))) tables[i][s] = w;
  return ProbabilisticWeights(n, std::move(tables));
}

ProbabilisticWeights ProbabilisticWeights::dictator(int n) {
  const std::uint32_t full = (1u << n) - 1;
  std::vector<std::vector<double>> tables(n, std::vector<double>(std::size_t{1} << n, 0.0));
  for (int i = 0; i < n; ++i) tables[i][full ^ (1u << i)] = 1.0;
  return ProbabilisticWeights(n, std::move(tables));
}

PayoffVector shapley_value(const TuGame& u) {
  const int n = u.players();
  const auto coeff = shapley_coefficients(n);
  PayoffVector phi(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const std::uint32_t bit = 1u << i;
    double total = 0.0;
    for (std::uint32_t s = 0; s < u.table_size(); ++s)
      if (!(s & bit)) total += coeff[std::popcount(s)] * (u.worth(s | bit) - u.worth(s));
    phi[i] = total;
  }
  return phi;
}

PayoffVector banzhaf_value(const TuGame& u) {
  const int n = u.players();
  const double w = std::ldexp(1.0, -(n - 1));
  PayoffVector psi(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const std::uint32_t bit = 1u << i;
    double total = 0.0;
    for (std::uint32_t s = 0; s < u.table_size(); ++s)
      if (!(s & bit)) total += u.worth(s | bit) - u.worth(s);
    psi[i] = w * total;
  }
  return psi;
}

PayoffVector probabilistic_value(const ProbabilisticWeights& w, const TuGame& u) {
  if (w.players() != u.players())
    throw std::invalid_argument("probabilistic_value: weight/game player mismatch");
  const int n = u.players();
  PayoffVector psi(n, 0.0);
  for (int i = 1; i <= n; ++i) {
    const std::uint32_t bit = 1u << (i - 1);
    double total = 0.0;
    for (std::uint32_t s = 0; s < u.table_size(); ++s)
      if (!(s & bit)) total += w.weight(i, s) * (u.worth(s | bit) - u.worth(s));
    psi[i - 1] = total;
  }
  return psi;
}

PayoffVector complementary_form_value(const ProbabilisticWeights& w, const TuGame& u) {
  if (w.players() != u.players())
    throw std::invalid_argument("complementary_form_value: weight/game player mismatch");
  const int n = u.players();
  const std::uint32_t full = u.grand().mask();
  PayoffVector psi(n, 0.0);
  for (int i = 1; i <= n; ++i) {
    const std::uint32_t bit = 1u << (i - 1);
    double total = 0.0;
    for (std::uint32_t s = 0; s <= full; ++s) {
      if (s & bit) continue;
      total += w.weight(i, full ^ (s | bit)) * (u.worth(full ^ s) - u.worth(s));
    }
    psi[i - 1] = total;
  }
  return psi;
}

GeneralizedWeights::GeneralizedWeights(int n, std::vector<Row> rows)
    : n_(n), rows_(std::move(rows)) {
  if (n < 1 || n > kMaxPlayers) throw std::invalid_argument("generalized weights: bad player count");
  if (rows_.size() != (std::size_t{1} << n))
    throw std::invalid_argument("generalized weights: expected one row per coalition");
  const std::uint32_t full = (1u << n) - 1;
  for (std::uint32_t s = 1; s <= full; ++s) {
    double total = 0.0;
    for (const auto& [t, q] : rows_[s]) {
      if (t & s)
        throw std::invalid_argument("generalized weights: row of coalition {" +
                                    Coalition(s).to_string() + "} touches the coalition itself");
      total += q;
    }
    if (std::abs(total - 1.0) > kExactTol)
      throw std::invalid_argument("generalized weights of coalition {" + Coalition(s).to_string() +
                                  "} sum to " + std::to_string(total) + ", expected 1");
  }
}

GeneralizedWeights GeneralizedWeights::shoga_weights(int n) {
  const std::uint32_t full = (1u << n) - 1;
  std::vector<Row> rows(std::size_t{1} << n);
  for (std::uint32_t s = 1; s <= full; ++s) {
    const std::uint32_t comp = full ^ s;
    if (comp == 0)
      rows[s] = {{0u, 1.0}};  // the two cases coincide at S = N
    else
      rows[s] = {{0u, 0.5}, {comp, 0.5}};
  }
  return GeneralizedWeights(n, std::move(rows));
}

std::vector<double> generalized_value(const GeneralizedWeights& q, const TuGame& u) {
  if (q.players() != u.players())
    throw std::invalid_argument("generalized_value: weight/game player mismatch");
  std::vector<double> psi(u.table_size(), 0.0);
  for (std::uint32_t s = 1; s < u.table_size(); ++s) {
    double total = 0.0;
    for (const auto& [t, weight] : q.row(s)) total += weight * (u.worth(t | s) - u.worth(t));
    psi[s] = total;
  }
  return psi;
}

ConsistencyReport associated_consistency_check(const std::string& value_name, const GameMap& map,
                                               std::span<const TuGame> suite, double tol) {
  if (suite.empty()) throw std::invalid_argument("associated_consistency_check: empty suite");
  PayoffVector (*value)(const TuGame&) = nullptr;
  if (value_name == "shapley")
    value = shapley_value;
  else if (value_name == "banzhaf")
    value = banzhaf_value;
  else
    throw std::invalid_argument("unknown value: '" + value_name + "'");

  ConsistencyReport report;
  report.value_name = value_name;
  report.map_name = map.name;
  for (const TuGame& u : suite) {
    const PayoffVector before = value(u);
    const PayoffVector after = value(map.apply(u));
    for (int i = 0; i < u.players(); ++i) {
      const double residual = std::abs(after[i] - before[i]);
      report.max_residual = std::max(report.max_residual, residual);
      if (residual > tol && report.pass) {
        report.pass = false;
        report.witness = ConsistencyWitness{u, i + 1, residual};
      }
    }
  }
  return report;
}

std::pair<double, double> shoga_via_quotient(const TuGame& u, Coalition s) {
  if (s.empty() || s == u.grand())
    throw std::invalid_argument("shoga_via_quotient: S must be a proper nonempty coalition");
  const Coalition comp = s.complement_in(u.players());
  // Two-player quotient game with player 1 = S, player 2 = N∖S.
  TuGame q(2, {0.0, u.worth(s), u.worth(comp), u.grand_worth()});
  const PayoffVector phi = shapley_value(q);
  return {phi[0], phi[1]};
}

}  // namespace shoga
