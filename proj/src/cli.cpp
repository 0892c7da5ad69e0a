#include "citedist/cli.hpp"

#include "citedist/data_io.hpp"
#include "citedist/dataset.hpp"
#include "citedist/diagnostics.hpp"
#include "citedist/error.hpp"
#include "citedist/fitting.hpp"
#include "citedist/selection.hpp"
#include "citedist/synthesis.hpp"
#include "file_util.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#ifndef CITEDIST_VERSION
#define CITEDIST_VERSION "0.0.0"
#endif

namespace citedist {

namespace fs = std::filesystem;

namespace {

/// Flag values that are individually valid but unusable together.
class ConfigError : public Error {
public:
  using Error::Error;
};

struct Options {
  std::vector<std::string> inputs;
  std::string format = "auto";
  std::string model = "both";
  std::string recovery_model = "lognormal";
  FitConfig cfg;
  int segments = kDefaultSegments;
  double z_threshold = kDefaultZThreshold;
  std::uint64_t seed = 1;
  std::string plot_dir;
  std::string out;
  int jobs = 1;
  std::string style = "parameters";

  // simulate
  double mu = 2.94, sigma = 1.03;
  double alpha = 7.7, offset = 175.4;
  std::int64_t n = 20000;
  int trials = 10;
  std::vector<std::string> components;
};

const char* category(int code) {
  switch (code) {
  case kExitUsage:
    return "usage";
  case kExitIo:
    return "io";
  case kExitParse:
    return "parse";
  case kExitConfig:
    return "config";
  case kExitVersion:
    return "version";
  default:
    return "internal";
  }
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  while (!s.empty() && s.back() == ' ')
    s.pop_back();
  return s;
}

// ---- option wiring ----------------------------------------------------------

void add_fit_flags(CLI::App& sub, Options& o) {
  sub.add_option("--alpha-cap", o.cfg.alpha_cap,
                 fmt::format("Upper bound on the hooked exponent; capped fits print as \"10k\" (default: {:g})",
                             kDefaultAlphaCap));
  sub.add_option("--truncation", o.cfg.truncation,
                 fmt::format("Hooked support 1..N; raised to 2 x max count when data exceed it (default: {})",
                             kDefaultTruncation));
  sub.add_flag("--tail-correct", o.cfg.tail_correction,
               "Add the integral bound on mass beyond the truncation to the hooked normalizer (default: off)");
  sub.add_option("--max-iterations", o.cfg.max_iterations, "Simplex iteration limit (default: 10000)");
  sub.add_option("--ll-tolerance", o.cfg.ll_tolerance,
                 "Relative log-likelihood spread at convergence (default: 1e-8)");
  sub.add_option("--x-tolerance", o.cfg.x_tolerance, "Simplex diameter at convergence (default: 1e-6)");
  sub.add_option("--sigma-min", o.cfg.sigma_min, "Lower bound on the lognormal sigma (default: 1e-3)");
}

void add_analysis_flags(CLI::App& sub, Options& o) {
  add_fit_flags(sub, o);
  sub.add_option("--model", o.model, "Models to fit: lognormal, hooked or both (default: both)")
      ->check(CLI::IsMember({"lognormal", "hooked", "both"}));
  sub.add_option("--format", o.format, "Input layout: auto, lines or labeled (default: auto)")
      ->check(CLI::IsMember({"auto", "lines", "labeled"}));
  sub.add_option("--segments", o.segments,
                 fmt::format("Log-spaced diagnostic segments (default: {})", kDefaultSegments));
  sub.add_option("--z-threshold", o.z_threshold,
                 fmt::format("Vuong |z| beyond which a winner is starred (default: {})", kDefaultZThreshold));
  sub.add_option("--plot", o.plot_dir, "Directory for per-journal SVG and CSV CDF plots");
  sub.add_option("--jobs", o.jobs, "Journals fitted concurrently (default: 1)");
}

void check_config(const Options& o) {
  try {
    validate(o.cfg);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (o.segments < 1)
    throw ConfigError("--segments must be >= 1");
  if (!(o.z_threshold > 0.0) || !std::isfinite(o.z_threshold))
    throw ConfigError("--z-threshold must be positive");
  if (o.jobs < 1)
    throw ConfigError("--jobs must be >= 1");
}

// ---- inputs -----------------------------------------------------------------

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream s;
    s << std::cin.rdbuf();
    return s.str();
  }
  return detail::read_file(path);
}

std::vector<CitationDataset> load_counts(const Options& o) {
  if (o.inputs.size() != 1)
    throw ConfigError("expected exactly one counts file");
  const auto& path = o.inputs.front();
  const auto text = read_input(path);
  const auto format = o.format == "lines"     ? CountFormat::one_per_line
                      : o.format == "labeled" ? CountFormat::labeled_two_column
                                              : detect_format(text);
  auto datasets = parse_counts(text, format);
  if (format == CountFormat::one_per_line) {
    // Unlabelled input takes its label from the file name.
    const auto label = path == "-" ? std::string("stdin") : fs::path(path).stem().string();
    datasets.front() = CitationDataset(label, datasets.front().counts(), false);
  }
  std::map<std::string, std::string> stems;
  for (const auto& ds : datasets) {
    const auto [it, inserted] = stems.emplace(file_stem(ds.label()), ds.label());
    if (!inserted)
      throw ConfigError(fmt::format("journals '{}' and '{}' share the output name '{}'", it->second, ds.label(),
                                    it->first));
  }
  return datasets;
}

bool is_document_input(const std::string& path) {
  return fs::is_directory(path) || fs::path(path).extension() == ".json";
}

std::vector<ResultDocument> load_documents(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(in))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
          found.push_back(entry.path());
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.emplace_back(in);
    }
  }
  if (files.empty())
    throw IoError("no result documents found");
  std::vector<ResultDocument> docs;
  for (const auto& f : files)
    docs.push_back(read_result_file(f));
  return docs;
}

// ---- analysis ---------------------------------------------------------------

std::string created_stamp() {
  const char* epoch = std::getenv("SOURCE_DATE_EPOCH");
  if (!epoch || !*epoch)
    return "";
  char* end = nullptr;
  const long long secs = std::strtoll(epoch, &end, 10);
  if (*end != '\0' || secs < 0)
    throw ConfigError("SOURCE_DATE_EPOCH must be a non-negative integer");
  const std::time_t t = static_cast<std::time_t>(secs);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Provenance provenance(const Options& o, std::optional<std::uint64_t> seed) {
  Provenance p;
  p.config = o.cfg;
  p.z_threshold = o.z_threshold;
  p.segment_count = o.segments;
  p.seed = seed;
  if (seed)
    p.generator = SeededGenerator::kAlgorithm;
  p.created = created_stamp();
  p.tool_version = CITEDIST_VERSION;
  return p;
}

struct Analysis {
  ResultDocument doc;
  std::string status;
};

Analysis analyse(const CitationDataset& raw, const Options& o, const Provenance& prov) {
  const auto ds = shift_counts(raw);
  Analysis a;
  auto& doc = a.doc;
  doc.label = raw.label();
  doc.n_articles = static_cast<std::int64_t>(raw.size());
  doc.provenance = prov;
  if (o.model != "hooked")
    doc.lognormal = fit_lognormal(ds, o.cfg);
  if (o.model != "lognormal")
    doc.hooked = fit_hooked(ds, o.cfg);
  if (doc.lognormal && doc.hooked)
    doc.comparison = vuong_test(ds, std::get<HookedPowerLawParams>(doc.hooked->params),
                                std::get<DiscretisedLognormalParams>(doc.lognormal->params), o.z_threshold);

  const auto plan = make_segments(raw.max_count(), o.segments);
  std::vector<PlotCurve> curves;
  if (doc.lognormal) {
    doc.lognormal_segments = segment_differences(ds, doc.lognormal->params, plan);
    curves.push_back({"lognormal", doc.lognormal->params});
  }
  if (doc.hooked) {
    doc.hooked_segments = segment_differences(ds, doc.hooked->params, plan);
    curves.push_back({"hooked", doc.hooked->params});
  }

  const auto stem = file_stem(doc.label);
  if (!o.out.empty())
    write_result_file(fs::path(o.out) / (stem + ".json"), doc);
  if (!o.plot_dir.empty())
    plot_series(ds, curves, fs::path(o.plot_dir) / (stem + ".svg"), fs::path(o.plot_dir) / (stem + ".csv"));

  a.status = fmt::format("{}: n={}", doc.label, doc.n_articles);
  if (doc.lognormal)
    a.status += fmt::format(" lognormal LL={:.1f}", doc.lognormal->log_likelihood);
  if (doc.hooked)
    a.status += fmt::format(" hooked LL={:.1f}{}", doc.hooked->log_likelihood,
                            doc.hooked->alpha_capped ? " (alpha capped)" : "");
  if (doc.comparison)
    a.status += fmt::format(" best={}", to_string(doc.comparison->winner));
  for (const auto* fit : {&doc.lognormal, &doc.hooked})
    if (*fit)
      for (const auto& w : (*fit)->warnings)
        a.status += fmt::format(" [{}: {}]", to_string((*fit)->model()), w);
  return a;
}

/// Runs analyse over every dataset with up to o.jobs workers. Results keep
/// input order; the first failure in input order is rethrown.
std::vector<ResultDocument> analyse_all(const std::vector<CitationDataset>& datasets, const Options& o,
                                        std::ostream& err) {
  for (const auto& dir : {o.out, o.plot_dir})
    if (!dir.empty()) {
      std::error_code ec;
      fs::create_directories(dir, ec);
      if (ec)
        throw IoError(fmt::format("{}: {}", dir, ec.message()));
    }
  const auto prov = provenance(o, std::nullopt);
  std::vector<std::optional<Analysis>> results(datasets.size());
  std::vector<std::exception_ptr> failures(datasets.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (auto i = next++; i < datasets.size(); i = next++) {
      try {
        results[i] = analyse(datasets[i], o, prov);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(o.jobs), datasets.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back(worker);
  }
  std::vector<ResultDocument> docs;
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    if (failures[i])
      std::rethrow_exception(failures[i]);
    err << results[i]->status << "\n";
    docs.push_back(std::move(results[i]->doc));
  }
  return docs;
}

void emit_table(const std::string& table, const Options& o, const std::string& name, std::ostream& out) {
  out << table;
  if (!o.out.empty())
    detail::write_file_atomic(fs::path(o.out) / name, table);
}

// ---- simulate ---------------------------------------------------------------

MixtureComponent parse_component(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  ss.imbue(std::locale::classic());
  std::string field;
  while (std::getline(ss, field, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(field, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != field.size())
      throw ConfigError(fmt::format("component '{}' is not mu,sigma[,weight]", text));
    parts.push_back(v);
  }
  if (parts.size() < 2 || parts.size() > 3)
    throw ConfigError(fmt::format("component '{}' is not mu,sigma[,weight]", text));
  return {{parts[0], parts[1]}, parts.size() == 3 ? parts[2] : 1.0};
}

int run_recovery(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.recovery_model == "both")
    throw ConfigError("simulate recovery needs --model lognormal or --model hooked");
  if (o.n < 1000)
    throw ConfigError("--n must be >= 1000");
  if (o.trials < 1)
    throw ConfigError("--trials must be >= 1");
  ModelParams truth;
  try {
    if (o.recovery_model == "lognormal") {
      const DiscretisedLognormalParams p{o.mu, o.sigma};
      validate(p, o.cfg.sigma_min);
      truth = p;
    } else {
      const HookedPowerLawParams p{o.alpha, o.offset, o.cfg.truncation, o.cfg.tail_correction};
      validate(p, o.cfg.alpha_cap);
      truth = p;
    }
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  std::vector<std::uint64_t> seeds;
  for (int t = 0; t < o.trials; ++t)
    seeds.push_back(o.seed + static_cast<std::uint64_t>(t));
  const auto report = recovery_experiment(truth, o.n, seeds, o.cfg);

  const bool lognormal = o.recovery_model == "lognormal";
  out << fmt::format("seed\t{}\t{}\terr {}\terr {}\tLL fit\tLL truth\n", lognormal ? "mu" : "alpha",
                     lognormal ? "sigma" : "B", lognormal ? "mu" : "alpha", lognormal ? "sigma" : "B");
  for (const auto& t : report.trials) {
    double first = 0.0, second = 0.0;
    if (lognormal) {
      const auto& p = std::get<DiscretisedLognormalParams>(t.fit.params);
      std::tie(first, second) = std::pair{p.mu, p.sigma};
    } else {
      const auto& p = std::get<HookedPowerLawParams>(t.fit.params);
      std::tie(first, second) = std::pair{p.alpha, p.offset};
    }
    out << fmt::format("{}\t{:.4f}\t{:.4f}\t{:.4f}\t{:.4f}\t{:.3f}\t{:.3f}\n", t.seed, first, second, t.error_first,
                       t.error_second, t.ll_fit, t.ll_truth);
  }
  out << fmt::format("median error\t{:.4f}\t{:.4f}\nworst error\t{:.4f}\t{:.4f}\nworst LL gap\t{:.4f}\n",
                     report.median_error_first, report.median_error_second, report.worst_error_first,
                     report.worst_error_second, report.worst_ll_gap);

  if (!o.out.empty()) {
    fs::create_directories(o.out);
    for (const auto& t : report.trials) {
      ResultDocument doc;
      doc.label = fmt::format("recovery-{}-seed{}", o.recovery_model, t.seed);
      doc.n_articles = o.n;
      (lognormal ? doc.lognormal : doc.hooked) = t.fit;
      doc.provenance = provenance(o, t.seed);
      write_result_file(fs::path(o.out) / (doc.label + ".json"), doc);
    }
  }
  err << fmt::format("recovery: {} trials of {} draws\n", report.trials.size(), o.n);
  return kExitOk;
}

int run_mixture(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.n < 1000)
    throw ConfigError("--n must be >= 1000");
  std::vector<MixtureComponent> parts;
  for (const auto& c : o.components)
    parts.push_back(parse_component(c));
  std::optional<MixtureSpec> spec;
  try {
    spec.emplace(parts);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  SeededGenerator gen(o.seed);
  const auto report = mixture_experiment(*spec, o.n, gen, o.cfg, o.z_threshold);

  ResultDocument doc;
  doc.label = fmt::format("mixture-seed{}", o.seed);
  doc.n_articles = o.n;
  doc.lognormal = report.lognormal;
  doc.hooked = report.hooked;
  doc.comparison = report.comparison;
  doc.provenance = provenance(o, o.seed);

  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& c = spec->components()[i];
    out << fmt::format("component {}: mu={:g} sigma={:g} weight={:.4f} drawn={}\n", i + 1, c.params.mu,
                       c.params.sigma, c.weight, report.component_counts[i]);
  }
  out << render_table({doc}, TableStyle::parameters);
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    write_result_file(fs::path(o.out) / (doc.label + ".json"), doc);
  }
  err << fmt::format("mixture: {} draws from {} components\n", o.n, parts.size());
  return kExitOk;
}

// ---- dispatch ---------------------------------------------------------------

int dispatch(CLI::App& app, CLI::App* fit, CLI::App* compare, CLI::App* diagnose, CLI::App* recovery,
             CLI::App* mixture, CLI::App* report, Options& o, std::ostream& out, std::ostream& err) {
  (void)app;
  if (fit->parsed()) {
    check_config(o);
    analyse_all(load_counts(o), o, err);
    return kExitOk;
  }
  if (compare->parsed()) {
    check_config(o);
    std::vector<ResultDocument> docs;
    if (!o.inputs.empty() && std::all_of(o.inputs.begin(), o.inputs.end(), is_document_input)) {
      docs = load_documents(o.inputs);
    } else {
      if (o.model != "both")
        throw ConfigError("compare fits both models; --model must be 'both'");
      docs = analyse_all(load_counts(o), o, err);
    }
    emit_table(render_table(docs, TableStyle::parameters), o, "parameters.tsv", out);
    return kExitOk;
  }
  if (diagnose->parsed()) {
    check_config(o);
    const auto docs = analyse_all(load_counts(o), o, err);
    emit_table(render_table(docs, TableStyle::segments), o, "segments.tsv", out);
    return kExitOk;
  }
  if (recovery->parsed()) {
    check_config(o);
    return run_recovery(o, out, err);
  }
  if (mixture->parsed()) {
    check_config(o);
    return run_mixture(o, out, err);
  }
  if (report->parsed()) {
    const auto docs = load_documents(o.inputs);
    const auto table = render_table(docs, o.style == "segments" ? TableStyle::segments : TableStyle::parameters);
    out << table;
    if (!o.out.empty())
      detail::write_file_atomic(o.out, table);
    return kExitOk;
  }
  throw ConfigError("no command given");
}

constexpr const char* kFooter = R"(Exit codes:
  0   success
  2   usage: unknown flag, missing argument or bad flag value
  3   io: unreadable input or unwritable output
  4   parse: malformed counts file or result document
  5   config: flags that conflict or fall outside their valid range
  6   version: result document written with another schema version
  10  internal: unexpected failure
Failures print one line "error: <category>: <message>" to stderr.)";

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Fit citation-count distributions and compare them.", "citedist"};
  app.footer(kFooter);
  app.require_subcommand(1);
  app.set_version_flag("--version", CITEDIST_VERSION);

  auto* fit = app.add_subcommand("fit", "Shift counts by one, fit models and write one result document per journal");
  add_analysis_flags(*fit, o);
  fit->add_option("input", o.inputs, "Counts file ('-' for stdin)")->required()->expected(1);
  fit->add_option("--out", o.out, "Directory for result documents")->required();

  auto* compare = app.add_subcommand(
      "compare", "Fit both models, run the Vuong test and print the parameters table; also accepts result documents");
  add_analysis_flags(*compare, o);
  compare->add_option("input", o.inputs, "Counts file, or result documents / directories")->required();
  compare->add_option("--out", o.out, "Directory for result documents and parameters.tsv");

  auto* diagnose =
      app.add_subcommand("diagnose", "Fit models and print signed maximum CDF differences per log-spaced segment");
  add_analysis_flags(*diagnose, o);
  diagnose->add_option("input", o.inputs, "Counts file ('-' for stdin)")->required()->expected(1);
  diagnose->add_option("--out", o.out, "Directory for result documents and segments.tsv");

  auto* simulate = app.add_subcommand("simulate", "Synthetic-data experiments with a seeded generator");
  simulate->require_subcommand(1);
  auto* recovery = simulate->add_subcommand("recovery", "Sample from known parameters and refit, once per seed");
  add_fit_flags(*recovery, o);
  recovery->add_option("--model", o.recovery_model, "Model to sample and refit: lognormal or hooked (default: lognormal)")
      ->check(CLI::IsMember({"lognormal", "hooked", "both"}));
  recovery->add_option("--mu", o.mu, "Lognormal mu (default: 2.94)");
  recovery->add_option("--sigma", o.sigma, "Lognormal sigma (default: 1.03)");
  recovery->add_option("--alpha", o.alpha, "Hooked alpha (default: 7.7)");
  recovery->add_option("--offset", o.offset, "Hooked B (default: 175.4)");
  recovery->add_option("--n", o.n, "Draws per trial (default: 20000)");
  recovery->add_option("--trials", o.trials, "Trials, with seeds seed, seed+1, ... (default: 10)");
  recovery->add_option("--seed", o.seed, "First seed (default: 1)");
  recovery->add_option("--out", o.out, "Directory for one result document per trial");

  auto* mixture = simulate->add_subcommand("mixture", "Pool draws from lognormal components and compare both fits");
  add_fit_flags(*mixture, o);
  mixture->add_option("--component", o.components, "Component as mu,sigma[,weight]; repeat for each")->required();
  mixture->add_option("--n", o.n, "Total draws (default: 20000)");
  mixture->add_option("--seed", o.seed, "Generator seed (default: 1)");
  mixture->add_option("--z-threshold", o.z_threshold,
                      fmt::format("Vuong |z| beyond which a winner is starred (default: {})", kDefaultZThreshold));
  mixture->add_option("--out", o.out, "Directory for the result document");

  auto* report = app.add_subcommand("report", "Render a table from stored result documents");
  report->add_option("input", o.inputs, "Result documents or directories of them")->required();
  report->add_option("--style", o.style, "parameters or segments (default: parameters)")
      ->check(CLI::IsMember({"parameters", "segments"}));
  report->add_option("--out", o.out, "Also write the table to this file");

  std::vector<const char*> argv;
  for (const auto& a : args)
    argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << CITEDIST_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << one_line(e.what()) << "\n";
    return kExitUsage;
  }

  int code = kExitInternal;
  std::string message;
  try {
    return dispatch(app, fit, compare, diagnose, recovery, mixture, report, o, out, err);
  } catch (const VersionError& e) {
    code = kExitVersion;
    message = e.what();
  } catch (const ParseError& e) {
    code = kExitParse;
    message = e.what();
  } catch (const IoError& e) {
    code = kExitIo;
    message = e.what();
  } catch (const ConfigError& e) {
    code = kExitConfig;
    message = e.what();
  } catch (const fs::filesystem_error& e) {
    code = kExitIo;
    message = e.what();
  } catch (const std::exception& e) {
    code = kExitInternal;
    message = e.what();
  }
  err << "error: " << category(code) << ": " << one_line(message) << "\n";
  return code;
}

} // namespace citedist
