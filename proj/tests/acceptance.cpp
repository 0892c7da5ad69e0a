// One line per acceptance criterion: "[PASS|FAIL|SKIP] <n> <name>: <detail>".
// Exits non-zero when any criterion fails. Tolerances are fixed below.

#include "citedist/data_io.hpp"
#include "citedist/diagnostics.hpp"
#include "citedist/distributions.hpp"
#include "citedist/extended_oracle.hpp"
#include "citedist/fitting.hpp"
#include "citedist/selection.hpp"
#include "citedist/synthesis.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

using namespace citedist;
namespace fs = std::filesystem;

namespace {

// Criterion 1
constexpr double kOracleRelTol = 1e-10;
constexpr int kOracleDigits = 60;
constexpr double kOracleSeconds = 60.0;
// Criterion 2
constexpr double kQuadratureAbsTol = 1e-8;
constexpr double kQuadratureSeconds = 10.0;
// Criterion 3
constexpr double kNormalizationTol = 1e-6;
constexpr double kNormalizationSeconds = 30.0;
// Criterion 4
constexpr double kRecoveryTol = 0.03;
constexpr int kRecoveryMinPasses = 9;
constexpr double kLlSlack = 0.01;
constexpr double kRecoverySeconds = 120.0;
// Criterion 5
constexpr int kVuongMinNegative = 9;
// Criterion 6
constexpr double kLabelSeconds = 1.0;
// Criterion 7
constexpr double kTableParamTol = 0.02;
constexpr double kTableLlTol = 1.0;
constexpr double kTableZTol = 0.3;
constexpr int kTableMinLabels = 48;
constexpr double kTableSeconds = 1800.0;
// Criterion 8
constexpr double kSegmentTol = 0.02;
constexpr double kSegmentSeconds = 60.0;

const std::vector<double> kAlphaGrid{1.5, 5.0, 77.0, 100.0, 10000.0};
const std::vector<double> kOffsetGrid{0.0, 0.1, 30.0, 1e5};
const std::vector<double> kMuGrid{-7.0, 0.0, 3.0};
const std::vector<double> kSigmaGrid{0.2, 1.0, 2.0};

std::vector<std::uint64_t> ten_seeds() {
  std::vector<std::uint64_t> s(10);
  std::iota(s.begin(), s.end(), 1);
  return s;
}

struct Outcome {
  enum class Status { pass, fail, skip } status;
  std::string detail;
};

Outcome verdict(bool ok, std::string detail) {
  return {ok ? Outcome::Status::pass : Outcome::Status::fail, std::move(detail)};
}

class Clock {
public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::vector<std::vector<std::string>> read_reference_table() {
  std::ifstream in(fs::path(CITEDIST_TEST_DATA_DIR) / "reference_table.tsv");
  if (!in)
    throw std::runtime_error("reference_table.tsv not found");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream s(line);
    for (std::string cell; std::getline(s, cell, '\t');)
      cells.push_back(cell);
    if (cells.size() == 10)
      rows.push_back(cells);
  }
  return rows;
}

// ---- 1 ----------------------------------------------------------------------

Outcome normalizer_oracle() {
  const Clock clock;
  double worst = 0.0;
  std::string where;
  bool finite_hard = false;
  for (double alpha : kAlphaGrid)
    for (double offset : kOffsetGrid) {
      const auto fast = hooked_log_norm({alpha, offset, 10000, false});
      const auto exact = extended_sum_oracle(alpha, offset, 10000, kOracleDigits);
      // Relative error of the sum itself.
      const double rel = std::abs(std::expm1(fast.value() - exact.value()));
      if (!(rel <= worst)) {
        worst = rel;
        where = fmt::format("alpha={:g} B={:g}", alpha, offset);
      }
    }
  const auto hard = hooked_log_norm({100.0, 200.0, 10000, false});
  const auto hard_exact = extended_sum_oracle(100.0, 200.0, 10000, kOracleDigits);
  finite_hard = std::isfinite(hard.value()) && !hard.is_zero() &&
                std::abs(std::expm1(hard.value() - hard_exact.value())) <= kOracleRelTol;
  const double t = clock.seconds();
  return verdict(worst <= kOracleRelTol && finite_hard && t <= kOracleSeconds,
                 fmt::format("max rel err {:.2e} (at {}) over 20 grid points, ln Z(100, 200) = {:.6f}, {:.1f} s", worst,
                             where, hard.value(), t));
}

// ---- 2 ----------------------------------------------------------------------

Outcome lognormal_quadrature() {
  using boost::math::quadrature::gauss_kronrod;
  const Clock clock;
  double worst = 0.0;
  std::string where;
  for (double mu : kMuGrid)
    for (double sigma : kSigmaGrid) {
      const long double m = mu, s = sigma;
      // Continuous density of ln X, integrated in t = ln x.
      auto density = [&](long double t) {
        const long double z = (t - m) / s;
        return std::exp(-0.5L * z * z) / (s * std::sqrt(2.0L * std::numbers::pi_v<long double>));
      };
      auto integrate = [&](long double a, long double b) {
        return gauss_kronrod<long double, 61>::integrate(density, a, b, 15, 1e-14L);
      };
      // [ln 0.5, inf) in pieces so the adaptive rule sees the peak.
      const long double lo = std::log(0.5L);
      const long double peak = std::max(lo, m);
      long double denominator = 0.0L;
      long double a = lo;
      for (long double b : {peak + s, peak + 4 * s, peak + 10 * s, peak + 40 * s}) {
        if (b > a) {
          denominator += integrate(a, b);
          a = b;
        }
      }
      for (std::int64_t n : {1, 2, 10, 100}) {
        const long double reference =
            integrate(std::log(static_cast<long double>(n) - 0.5L), std::log(static_cast<long double>(n) + 0.5L)) /
            denominator;
        const double ours = dln_log_pmf(n, {mu, sigma}).linear();
        const double err = std::abs(ours - static_cast<double>(reference));
        if (!(err <= worst)) {
          worst = err;
          where = fmt::format("mu={:g} sigma={:g} n={}", mu, sigma, n);
        }
      }
    }
  const double t = clock.seconds();
  return verdict(worst <= kQuadratureAbsTol && t <= kQuadratureSeconds,
                 fmt::format("max abs err {:.2e} (at {}) over 36 points, {:.2f} s", worst, where, t));
}

// ---- 3 ----------------------------------------------------------------------

struct Compensated {
  double sum = 0.0, carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

Outcome normalization() {
  const Clock clock;
  double worst = 0.0;
  std::string where;
  auto record = [&](double total, const std::string& label) {
    const double err = std::abs(total - 1.0);
    if (!(err <= worst)) {
      worst = err;
      where = label;
    }
  };
  for (double alpha : kAlphaGrid)
    for (double offset : kOffsetGrid) {
      const std::int64_t n_max = 10000;
      const HookedPowerLaw h({alpha, offset, n_max, true});
      Compensated s;
      for (std::int64_t n = 1; n <= n_max; ++n)
        s.add(h.log_pmf(n).linear());
      // Euler-Maclaurin remainder for n > N, computed apart from the
      // normalizer's own tail term.
      const double m = offset + static_cast<double>(n_max + 1);
      const double log_f = -alpha * std::log(m) - h.log_norm().value();
      const double tail = std::exp(log_f) * (m / (alpha - 1.0) + 0.5 + alpha / (12.0 * m));
      record(s.sum + tail, fmt::format("hooked alpha={:g} B={:g}", alpha, offset));
    }
  for (double mu : kMuGrid)
    for (double sigma : kSigmaGrid) {
      const DiscretisedLognormal d({mu, sigma});
      const auto q = d.upper_quantile(kSamplingTail);
      Compensated s;
      for (std::int64_t n = 1; n <= q; ++n)
        s.add(d.log_pmf(n).linear());
      record(s.sum + std::exp(d.log_sf(q)), fmt::format("lognormal mu={:g} sigma={:g} (support 1..{})", mu, sigma, q));
    }
  const double t = clock.seconds();
  return verdict(worst <= kNormalizationTol && t <= kNormalizationSeconds,
                 fmt::format("max |sum - 1| {:.2e} (at {}) over 29 models, {:.1f} s", worst, where, t));
}

// ---- 4 ----------------------------------------------------------------------

Outcome recovery() {
  const Clock clock;
  const auto ln = recovery_experiment(DiscretisedLognormalParams{2.94, 1.03}, 20000, ten_seeds());
  int ln_pass = 0;
  for (const auto& trial : ln.trials)
    if (trial.error_first <= kRecoveryTol && trial.error_second <= kRecoveryTol)
      ++ln_pass;
  const auto hk = recovery_experiment(HookedPowerLawParams{7.7, 175.4, kDefaultTruncation, false}, 20000, ten_seeds());
  int hk_pass = 0;
  for (const auto& trial : hk.trials)
    if (trial.ll_fit >= trial.ll_truth - kLlSlack)
      ++hk_pass;
  const double t = clock.seconds();
  return verdict(ln_pass >= kRecoveryMinPasses && hk_pass == 10 && t <= kRecoverySeconds,
                 fmt::format("lognormal within {} on {}/10 seeds (worst |dmu|={:.4f}, |dsigma|={:.4f}); hooked LL "
                             "dominance {}/10 (min gap {:+.4f}); {:.1f} s",
                             kRecoveryTol, ln_pass, ln.worst_error_first, ln.worst_error_second, hk_pass,
                             hk.worst_ll_gap, t));
}

// ---- 5 ----------------------------------------------------------------------

Outcome vuong_direction() {
  int negative = 0, coupled = 0, with_variance = 0;
  std::string zs;
  for (auto seed : ten_seeds()) {
    SeededGenerator gen(seed);
    const auto ds = sample(DiscretisedLognormalParams{3.0, 1.0}, 5000, gen);
    const auto l = std::get<DiscretisedLognormalParams>(fit_lognormal(ds).params);
    const auto h = std::get<HookedPowerLawParams>(fit_hooked(ds).params);
    const auto r = vuong_test(ds, h, l);
    if (r.status != VuongStatus::ok)
      continue;
    ++with_variance;
    const double z = *r.vuong_z;
    const double diff = r.ll_hooked - r.ll_lognormal;
    if (z < 0.0)
      ++negative;
    if ((z > 0.0) == (diff > 0.0) && (z < 0.0) == (diff < 0.0))
      ++coupled;
    zs += fmt::format("{}{:.2f}", zs.empty() ? "" : ",", z);
  }
  return verdict(negative >= kVuongMinNegative && coupled == with_variance,
                 fmt::format("z < 0 on {}/10 seeds, sign(z) = sign(LL diff) on {}/{} (z: {})", negative, coupled,
                             with_variance, zs));
}

// ---- 6 ----------------------------------------------------------------------

Outcome winner_labels() {
  const auto rows = read_reference_table();
  const Clock clock;
  int match = 0;
  std::string first_miss;
  for (const auto& row : rows) {
    const auto label = to_string(classify_winner(std::stod(row[8])));
    if (label == row[9])
      ++match;
    else if (first_miss.empty())
      first_miss = fmt::format("; first miss {} z={} got {}", row[0], row[8], label);
  }
  const double t = clock.seconds();
  return verdict(rows.size() == 50 && match == 50 && t <= kLabelSeconds,
                 fmt::format("{}/{} labels reproduced{}, {:.4f} s", match, rows.size(), first_miss, t));
}

// ---- 7 ----------------------------------------------------------------------

Outcome table_reproduction() {
  const char* path = std::getenv("CITEDIST_REFERENCE_COUNTS");
  if (!path || !*path)
    return {Outcome::Status::skip,
            "set CITEDIST_REFERENCE_COUNTS to the journal,citations file of the public supplement to run"};
  const Clock clock;
  std::ifstream in(path);
  if (!in)
    return verdict(false, fmt::format("cannot read {}", path));
  std::map<std::string, CitationDataset> by_label;
  for (auto& ds : parse_counts(in, CountFormat::labeled_two_column))
    by_label.emplace(ds.label(), ds);

  const auto rows = read_reference_table();
  int labels = 0, params_ok = 0, lls_ok = 0, z_ok = 0, caps_ok = 0, caps = 0, found = 0;
  std::string misses;
  for (const auto& row : rows) {
    const auto it = by_label.find(row[0]);
    if (it == by_label.end()) {
      misses += fmt::format(" [missing {}]", row[0]);
      continue;
    }
    ++found;
    const auto ds = shift_counts(it->second);
    const auto ln = fit_lognormal(ds);
    const auto hk = fit_hooked(ds);
    const auto& lp = std::get<DiscretisedLognormalParams>(ln.params);
    const auto cmp = vuong_test(ds, std::get<HookedPowerLawParams>(hk.params), lp);
    const double z = cmp.vuong_z.value_or(NAN);
    if (std::abs(lp.mu - std::stod(row[2])) <= kTableParamTol && std::abs(lp.sigma - std::stod(row[3])) <= kTableParamTol)
      ++params_ok;
    if (std::abs(ln.log_likelihood - std::stod(row[4])) <= kTableLlTol &&
        std::abs(hk.log_likelihood - std::stod(row[7])) <= kTableLlTol)
      ++lls_ok;
    if (std::abs(z - std::stod(row[8])) <= kTableZTol)
      ++z_ok;
    if (to_string(cmp.winner) == row[9])
      ++labels;
    else
      misses += fmt::format(" [{}: z={:.2f} {}]", row[0], z, to_string(cmp.winner));
    if (row[5] == "10k") {
      ++caps;
      if (hk.alpha_capped)
        ++caps_ok;
    }
  }
  const double t = clock.seconds();
  const int n = static_cast<int>(rows.size());
  return verdict(found == n && params_ok == n && lls_ok == n && z_ok == n && labels >= kTableMinLabels &&
                     caps_ok == caps && t <= kTableSeconds,
                 fmt::format("journals {}/{}, mu/sigma {}/{}, LL {}/{}, z {}/{}, labels {}/{}, capped {}/{}, {:.0f} s{}",
                             found, n, params_ok, n, lls_ok, n, z_ok, n, labels, n, caps_ok, caps, t, misses));
}

// ---- 8 ----------------------------------------------------------------------

bool segments_well_formed(std::int64_t n_max) {
  const auto plan = make_segments(n_max, kDefaultSegments);
  std::int64_t covered = 0;
  if (plan.segments.front().start != 1)
    return false;
  for (const auto& s : plan.segments) {
    if (s.empty)
      continue;
    if (s.start != covered + 1 || s.end < s.start || s.end > 1 + n_max)
      return false;
    covered = s.end;
  }
  return covered == 1 + n_max;
}

Outcome segment_consistency() {
  const Clock clock;
  // A fitted model of each family, from data shaped like a large journal.
  SeededGenerator seed_gen(2006);
  const auto source = sample(DiscretisedLognormalParams{2.94, 1.03}, 6000, seed_gen);
  const std::vector<ModelParams> fitted{fit_lognormal(source).params, fit_hooked(source).params};
  double worst = 0.0;
  for (std::size_t i = 0; i < fitted.size(); ++i) {
    SeededGenerator gen(8 + i);
    const auto ds = sample(fitted[i], 50000, gen);
    const auto diag = segment_differences(ds, Model(fitted[i]), make_segments(ds.max_count() - 1));
    for (std::size_t s = 0; s < diag.segments.size(); ++s)
      if (!diag.segments[s].empty)
        worst = std::max(worst, std::abs(diag.signed_max_diff[s]));
  }

  // Every n_max up to 10^5, then a log-spaced sample up to 10^6, plus every
  // case where a boundary is an exact integer.
  std::int64_t scanned = 0, bad = -1;
  auto scan = [&](std::int64_t n_max) {
    ++scanned;
    if (bad < 0 && !segments_well_formed(n_max))
      bad = n_max;
  };
  for (std::int64_t n = 0; n <= 100000; ++n)
    scan(n);
  for (int i = 0; i <= 4000; ++i)
    scan(static_cast<std::int64_t>(std::floor(std::pow(10.0, 5.0 + i / 4000.0))));
  for (std::int64_t r = 2; r * r * r * r <= 1000001; ++r)
    scan(r * r * r * r - 1);
  const double t = clock.seconds();
  return verdict(worst < kSegmentTol && bad < 0 && t <= kSegmentSeconds,
                 fmt::format("max |diff| {:.4f} over both fitted models at n=50000; {} n_max values scanned, {}; {:.1f} s",
                             worst, scanned, bad < 0 ? "all disjoint and ordered" : fmt::format("bad at {}", bad), t));
}

// ---- 9 ----------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file())
      files[fs::relative(e.path(), root).string()] = slurp(e.path());
  return files;
}

Outcome determinism() {
  const auto base = fs::temp_directory_path() / "citedist_acceptance_determinism";
  fs::remove_all(base);
  fs::create_directories(base);
  const auto input = base / "counts.csv";
  {
    std::ofstream out(input);
    out << "journal,citations\n";
    const std::vector<std::pair<std::string, DiscretisedLognormalParams>> journals{
        {"Journal One", {2.94, 1.03}}, {"Journal Two", {1.2, 0.9}}, {"Journal Three", {3.5, 0.8}}};
    std::uint64_t seed = 40;
    for (const auto& [label, p] : journals) {
      SeededGenerator gen(seed++);
      const auto drawn = sample(p, 1500, gen);
      for (auto c : drawn.counts())
        out << label << "," << c - 1 << "\n";
    }
  }
  const std::string cli = CITEDIST_CLI_PATH;
  auto run = [&](const fs::path& dir) {
    fs::create_directories(dir);
    const auto q = [](const fs::path& p) { return "\"" + p.string() + "\""; };
    const std::vector<std::string> commands{
        fmt::format("{} fit {} --out {} --plot {} --jobs 2", q(cli), q(input), q(dir / "fit"), q(dir / "plots")),
        fmt::format("{} compare {} --out {} > {}", q(cli), q(input), q(dir / "compare"), q(dir / "compare.txt")),
        fmt::format("{} diagnose {} --out {} > {}", q(cli), q(input), q(dir / "diagnose"), q(dir / "diagnose.txt")),
        fmt::format("{} report {} --style segments --out {} > {}", q(cli), q(dir / "fit"), q(dir / "report.tsv"),
                    q(dir / "report.txt")),
        fmt::format("{} simulate mixture --component 1,1 --component 4,1,2 --n 5000 --seed 11 --out {} > {}", q(cli),
                    q(dir / "mixture"), q(dir / "mixture.txt")),
        fmt::format("{} simulate recovery --n 3000 --trials 2 --seed 3 --out {} > {}", q(cli), q(dir / "recovery"),
                    q(dir / "recovery.txt")),
    };
    for (const auto& c : commands)
      if (std::system((c + " 2>/dev/null").c_str()) != 0)
        return false;
    return true;
  };
  const bool ran = run(base / "a") && run(base / "b");
  if (!ran)
    return verdict(false, "a CLI run exited non-zero");
  const auto a = tree(base / "a"), b = tree(base / "b");
  std::size_t same = 0;
  std::string differing;
  for (const auto& [name, content] : a) {
    const auto it = b.find(name);
    if (it != b.end() && it->second == content)
      ++same;
    else if (differing.empty())
      differing = "; first difference " + name;
  }
  const bool ok = same == a.size() && a.size() == b.size() && a.size() >= 20;
  fs::remove_all(base);
  return verdict(ok, fmt::format("{}/{} files byte-identical across two runs{}", same, a.size(), differing));
}

} // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "normalizer matches extended-precision oracle", normalizer_oracle},
      {2, "discretised lognormal matches quadrature", lognormal_quadrature},
      {3, "PMFs sum to one with tail handling", normalization},
      {4, "parameter recovery at 20000 samples", recovery},
      {5, "Vuong direction on lognormal data", vuong_direction},
      {6, "winner labels of the reference table", winner_labels},
      {7, "reference table reproduction", table_reproduction},
      {8, "segment diagnostic self-consistency", segment_consistency},
      {9, "CLI determinism", determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {Outcome::Status::fail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.status == Outcome::Status::pass ? "PASS" : o.status == Outcome::Status::fail ? "FAIL" : "SKIP";
    if (o.status == Outcome::Status::fail)
      ++failures;
    std::cout << fmt::format("[{}] criterion {}: {}: {}", tag, c.id, c.name, o.detail) << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
