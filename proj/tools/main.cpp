// btrank: fit Bradley-Terry scores under identifying constraints, report
// standard errors and confidence intervals, and run the simulation harness.
//
// Exit codes: 0 success, 1 usage or I/O failure, 2 model-level failure
// (non-identifiable data or constraint).

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "btrank/connectivity.hpp"
#include "btrank/csv_io.hpp"
#include "btrank/inference.hpp"
#include "btrank/simulate.hpp"
#include "btrank/solver.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitModel = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_double(double value, const char* format = "%.6f") {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), format, value);
  return buffer;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw btrank::IoError("cannot open for writing: " + path);
  out << text;
  if (!out) throw btrank::IoError("write failure: " + path);
}

// --- fit ------------------------------------------------------------------

struct ConstraintSpec {
  std::string raw = "sum";

  btrank::Constraint resolve(const btrank::ComparisonData& data) const {
    if (raw == "sum") return btrank::Constraint::sum(data.n());
    if (raw.rfind("ref:", 0) == 0) {
      const std::string label = raw.substr(4);
      const auto index = data.index_of(label);
      if (!index) throw UsageError("unknown object label: " + label);
      return btrank::Constraint::reference(*index, data.n());
    }
    if (raw.rfind("alpha:", 0) == 0) {
      std::vector<double> values;
      std::stringstream stream(raw.substr(6));
      std::string field;
      while (std::getline(stream, field, ',')) {
        try {
          std::size_t used = 0;
          values.push_back(std::stod(field, &used));
          if (used != field.size()) throw std::invalid_argument(field);
        } catch (const std::exception&) {
          throw UsageError("bad alpha entry: " + field);
        }
      }
      if (static_cast<int>(values.size()) != data.n()) {
        throw UsageError("alpha needs " + std::to_string(data.n()) +
                         " entries, got " + std::to_string(values.size()));
      }
      Eigen::VectorXd alpha(values.size());
      for (std::size_t i = 0; i < values.size(); ++i) alpha[i] = values[i];
      return btrank::Constraint(std::move(alpha));
    }
    throw UsageError("bad constraint spec (sum | ref:<label> | alpha:...): " +
                     raw);
  }

  ordered_json describe() const {
    ordered_json doc;
    if (raw == "sum") {
      doc["type"] = "sum";
    } else if (raw.rfind("ref:", 0) == 0) {
      doc["type"] = "reference";
      doc["label"] = raw.substr(4);
    } else {
      doc["type"] = "custom";
      doc["spec"] = raw;
    }
    return doc;
  }
};

struct FitReport {
  std::vector<int> order;  // object indices sorted by estimate descending
  const btrank::ComparisonData& data;
  const btrank::FitResult& fit;
  const btrank::VarianceEstimate& var;
  std::vector<btrank::ConfidenceInterval> intervals;
  double multiplier;
  ConstraintSpec constraint_spec;
};

FitReport make_fit_report(const btrank::ComparisonData& data,
                          const btrank::FitResult& fit,
                          const btrank::VarianceEstimate& var,
                          double multiplier, ConstraintSpec constraint_spec) {
  std::vector<int> order(data.n());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return fit.beta_hat[a] > fit.beta_hat[b];
  });
  return FitReport{std::move(order),
                   data,
                   fit,
                   var,
                   btrank::confidence_intervals(fit, var, multiplier),
                   multiplier,
                   std::move(constraint_spec)};
}

std::string render_fit_table(const FitReport& report) {
  std::ostringstream out;
  out << "constraint: " << report.constraint_spec.raw
      << "  loglik: " << format_double(report.fit.loglik)
      << "  comparisons: " << report.data.total_comparisons() << "\n";
  std::size_t width = 5;
  for (const auto& label : report.data.labels()) {
    width = std::max(width, label.size());
  }
  out << std::left << std::setw(static_cast<int>(width)) << "label"
      << std::right << std::setw(12) << "estimate" << std::setw(12) << "se"
      << std::setw(12) << "ci_low" << std::setw(12) << "ci_high" << "\n";
  for (int i : report.order) {
    out << std::left << std::setw(static_cast<int>(width))
        << report.data.label(i) << std::right << std::setw(12)
        << format_double(report.fit.beta_hat[i]) << std::setw(12)
        << format_double(report.var.se[i]) << std::setw(12)
        << format_double(report.intervals[i].low) << std::setw(12)
        << format_double(report.intervals[i].high) << "\n";
  }
  return out.str();
}

std::string render_fit_csv(const FitReport& report) {
  std::ostringstream out;
  out << "label,estimate,se,ci_low,ci_high\n";
  for (int i : report.order) {
    out << report.data.label(i) << ','
        << format_double(report.fit.beta_hat[i], "%.12g") << ','
        << format_double(report.var.se[i], "%.12g") << ','
        << format_double(report.intervals[i].low, "%.12g") << ','
        << format_double(report.intervals[i].high, "%.12g") << '\n';
  }
  return out.str();
}

std::string render_fit_json(const FitReport& report) {
  ordered_json doc;
  auto labels = ordered_json::array();
  auto estimates = ordered_json::array();
  auto se = ordered_json::array();
  auto low = ordered_json::array();
  auto high = ordered_json::array();
  for (int i : report.order) {
    labels.push_back(report.data.label(i));
    estimates.push_back(report.fit.beta_hat[i]);
    se.push_back(report.var.se[i]);
    low.push_back(report.intervals[i].low);
    high.push_back(report.intervals[i].high);
  }
  doc["labels"] = std::move(labels);
  doc["estimates"] = std::move(estimates);
  doc["se"] = std::move(se);
  doc["ci"] = {{"multiplier", report.multiplier},
               {"low", std::move(low)},
               {"high", std::move(high)}};
  doc["constraint"] = report.constraint_spec.describe();
  doc["loglik"] = report.fit.loglik;
  doc["n_comparisons"] = report.data.total_comparisons();
  return doc.dump(2) + "\n";
}

void print_witness(const btrank::ConnectivityReport& report,
                   const btrank::ComparisonData& data, std::ostream& out) {
  if (!report.witness) return;
  auto label_set = [&](const std::vector<int>& indices) {
    std::string text = "{";
    for (std::size_t k = 0; k < indices.size(); ++k) {
      if (k) text += ", ";
      text += data.label(indices[k]);
    }
    return text + "}";
  };
  out << "not strongly connected: no object in "
      << label_set(report.witness->complement) << " has beaten any object in "
      << label_set(report.witness->group)
      << "; consider analyzing the groups separately\n";
}

int cmd_fit(const std::string& input, const ConstraintSpec& constraint_spec,
            double multiplier, const std::string& format,
            const std::string& out_path) {
  const btrank::ComparisonData data = btrank::load_csv(input);
  try {
    const btrank::Constraint constraint = constraint_spec.resolve(data);
    const btrank::FitResult fit = btrank::fit_with_constraint(data, constraint);
    const btrank::FitResult sum_fit =
        constraint.is_sum() ? fit : btrank::fit_sum_constraint(data);
    const btrank::VarianceEstimate var_sum =
        btrank::variance_sum_constraint(sum_fit, data);
    const btrank::VarianceEstimate var =
        constraint.is_sum()
            ? var_sum
            : btrank::variance_general_constraint(var_sum, constraint);

    const FitReport report =
        make_fit_report(data, fit, var, multiplier, constraint_spec);
    std::string rendered;
    if (format == "table") {
      rendered = render_fit_table(report);
    } else if (format == "csv") {
      rendered = render_fit_csv(report);
    } else if (format == "json") {
      rendered = render_fit_json(report);
    } else {
      throw UsageError("bad format (table | csv | json): " + format);
    }
    std::cout << rendered;
    if (!out_path.empty()) write_text(out_path, rendered);
    return kExitOk;
  } catch (const btrank::NotConnectedError& error) {
    std::cerr << "error: " << error.what() << "\n";
    print_witness(error.report(), data, std::cerr);
    return kExitModel;
  }
}

// --- check ----------------------------------------------------------------

int cmd_check(const std::string& input, const std::string& format,
              const std::string& out_path) {
  const btrank::ComparisonData data = btrank::load_csv(input);
  const btrank::ConnectivityReport report = btrank::check_connectivity(data);

  std::vector<std::int64_t> per_object(data.n());
  for (int i = 0; i < data.n(); ++i) per_object[i] = data.comparisons_for(i);
  const auto fewest = static_cast<int>(
      std::min_element(per_object.begin(), per_object.end()) -
      per_object.begin());

  std::string rendered;
  if (format == "json") {
    ordered_json doc = ordered_json::parse(btrank::to_json(data));
    doc["total_comparisons"] = data.total_comparisons();
    doc["comparisons_per_object"] = per_object;
    doc["strongly_connected"] = report.strongly_connected;
    doc["components"] = report.components;
    if (report.witness) {
      doc["witness"] = {{"group", report.witness->group},
                        {"complement", report.witness->complement}};
    }
    rendered = doc.dump(2) + "\n";
  } else if (format == "csv") {
    std::vector<int> component_of(data.n(), -1);
    for (std::size_t c = 0; c < report.components.size(); ++c) {
      for (int v : report.components[c]) component_of[v] = static_cast<int>(c);
    }
    std::ostringstream out;
    out << "label,comparisons,component\n";
    for (int i = 0; i < data.n(); ++i) {
      out << data.label(i) << ',' << per_object[i] << ','
          << component_of[i] + 1 << '\n';
    }
    rendered = out.str();
  } else if (format == "table") {
    std::ostringstream out;
    out << "objects: " << data.n()
        << "  comparisons: " << data.total_comparisons() << "\n";
    out << "strongly connected: " << (report.strongly_connected ? "yes" : "no")
        << "\n";
    for (std::size_t c = 0; c < report.components.size(); ++c) {
      out << "component " << c + 1 << ":";
      for (int v : report.components[c]) out << ' ' << data.label(v);
      out << "\n";
    }
    out << "comparisons per object:\n";
    for (int i = 0; i < data.n(); ++i) {
      out << "  " << data.label(i) << ' ' << per_object[i] << "\n";
    }
    out << "fewest comparisons: " << data.label(fewest) << " ("
        << per_object[fewest] << ")\n";
    rendered = out.str();
  } else {
    throw UsageError("bad format (table | csv | json): " + format);
  }

  std::cout << rendered;
  if (!out_path.empty()) write_text(out_path, rendered);
  if (!report.strongly_connected) {
    print_witness(report, data, std::cerr);
    return kExitModel;
  }
  return kExitOk;
}

// --- simulate ---------------------------------------------------------------

btrank::SubjectComparisons parse_dist(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string args =
      colon == std::string::npos ? "" : spec.substr(colon + 1);
  try {
    if (kind == "fixed") return btrank::SubjectComparisons::fixed(std::stol(args));
    if (kind == "poisson") {
      return btrank::SubjectComparisons::poisson(std::stod(args));
    }
    if (kind == "uniform") {
      const auto comma = args.find(',');
      if (comma == std::string::npos) throw std::invalid_argument(args);
      return btrank::SubjectComparisons::uniform(
          std::stol(args.substr(0, comma)), std::stol(args.substr(comma + 1)));
    }
  } catch (const btrank::InvalidSpecError&) {
    throw;
  } catch (const std::exception&) {
    throw UsageError("bad distribution arguments: " + spec);
  }
  throw UsageError("bad distribution (fixed:k | poisson:l | uniform:a,b): " +
                   spec);
}

std::vector<long> parse_ladder(const std::string& spec) {
  std::vector<long> ladder;
  std::stringstream stream(spec);
  std::string field;
  while (std::getline(stream, field, ',')) {
    try {
      ladder.push_back(std::stol(field));
    } catch (const std::exception&) {
      throw UsageError("bad ladder entry: " + field);
    }
  }
  return ladder;
}

int cmd_simulate(const std::string& experiment, int n, long subjects,
                 const std::string& ladder_spec, int replications,
                 const std::string& dist, double multiplier,
                 std::uint64_t seed, const std::string& prefix) {
  btrank::DesignSpec spec;
  spec.beta_star = btrank::centered_linspace(n, -1.0, 1.0);
  spec.pair_frequency = btrank::uniform_pair_frequency(n);
  spec.subjects = subjects;
  spec.comparisons = parse_dist(dist);
  spec.seed = seed;

  if (experiment == "coverage") {
    const btrank::CoverageResult result =
        btrank::coverage_experiment(spec, replications, multiplier);

    std::ostringstream rows;
    rows << "S,replication,total_comparisons";
    for (int i = 0; i < n; ++i) rows << ",covered_" << i + 1;
    rows << '\n';
    for (std::size_t r = 0; r < result.replications.size(); ++r) {
      const auto& rec = result.replications[r];
      rows << subjects << ',' << r << ',' << rec.total_comparisons;
      for (int i = 0; i < n; ++i) rows << ',' << int{rec.covered[i]};
      rows << '\n';
    }
    write_text(prefix + "_replications.csv", rows.str());

    std::ostringstream summary;
    summary << "object,coverage\n";
    for (int i = 0; i < n; ++i) {
      summary << i + 1 << ',' << format_double(result.per_object[i], "%.6f")
              << '\n';
    }
    summary << "aggregate," << format_double(result.aggregate, "%.6f") << '\n';
    write_text(prefix + "_summary.csv", summary.str());

    const bool pass = result.aggregate >= 0.93 && result.aggregate <= 0.975;
    std::cout << "coverage experiment: n=" << n << " S=" << subjects
              << " R=" << replications << " multiplier=" << multiplier
              << " seed=" << seed << "\n"
              << "excluded replications: " << result.excluded << "\n"
              << "aggregate coverage: "
              << format_double(result.aggregate, "%.4f")
              << "  target [0.93, 0.975]  " << (pass ? "PASS" : "FAIL") << "\n"
              << "wrote " << prefix << "_replications.csv, " << prefix
              << "_summary.csv\n";
    return kExitOk;
  }

  if (experiment == "consistency") {
    const std::vector<long> ladder = parse_ladder(ladder_spec);
    const btrank::ConsistencyResult result =
        btrank::consistency_experiment(spec, ladder, replications);

    std::ostringstream rows;
    rows << "S,replication,excluded,sup_error\n";
    for (const auto& sample : result.samples) {
      rows << sample.subjects << ',' << sample.replication << ','
           << int{sample.excluded} << ','
           << format_double(sample.sup_error, "%.12g") << '\n';
    }
    write_text(prefix + "_replications.csv", rows.str());

    std::ostringstream summary;
    summary << "S,used,excluded,mean_error,median_error,q90_error\n";
    for (const auto& row : result.rows) {
      summary << row.subjects << ',' << row.used << ',' << row.excluded << ','
              << format_double(row.mean_error, "%.12g") << ','
              << format_double(row.median_error, "%.12g") << ','
              << format_double(row.q90_error, "%.12g") << '\n';
    }
    write_text(prefix + "_summary.csv", summary.str());

    const bool pass = result.errors_strictly_decreasing();
    std::cout << "consistency experiment: n=" << n << " R=" << replications
              << " seed=" << seed << "\n";
    for (const auto& row : result.rows) {
      std::cout << "  S=" << row.subjects
                << " mean=" << format_double(row.mean_error)
                << " median=" << format_double(row.median_error)
                << " q90=" << format_double(row.q90_error)
                << " excluded=" << row.excluded << "\n";
    }
    std::cout << "mean errors strictly decreasing: " << (pass ? "PASS" : "FAIL")
              << "\n"
              << "wrote " << prefix << "_replications.csv, " << prefix
              << "_summary.csv\n";
    return kExitOk;
  }

  throw UsageError("bad experiment (coverage | consistency): " + experiment);
}

// --- demo -------------------------------------------------------------------

std::string render_interval_csv(const std::vector<std::string>& labels,
                                const std::vector<btrank::ConfidenceInterval>&
                                    intervals) {
  std::ostringstream out;
  out << "label,center,low,high\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << labels[i] << ',' << format_double(intervals[i].center, "%.12g")
        << ',' << format_double(intervals[i].low, "%.12g") << ','
        << format_double(intervals[i].high, "%.12g") << '\n';
  }
  return out.str();
}

int cmd_demo(std::uint64_t seed, const std::string& prefix) {
  const btrank::DemoReport report = btrank::uncertainty_concentration_demo(seed);
  write_text(prefix + "_sum.csv",
             render_interval_csv(report.labels, report.ci_sum));
  write_text(prefix + "_reference.csv",
             render_interval_csv(report.labels, report.ci_reference));

  const std::string& rare = report.labels[report.rare_index];
  int max_se_index = 0;
  report.var_sum.se.maxCoeff(&max_se_index);
  std::cout << "synthetic pairwise survey: " << report.labels.size()
            << " objects, " << report.total_comparisons << " comparisons\n"
            << "rare object: " << rare << " (" << report.rare_comparisons
            << " comparisons)\n"
            << "sum constraint: total variance "
            << format_double(report.trace_sum, "%.4f") << ", widest interval "
            << report.labels[max_se_index] << "\n"
            << "reference constraint (ref = " << rare << "): total variance "
            << format_double(report.trace_reference, "%.4f")
            << ", reference SE exactly 0\n"
            << "trace excess of the reference constraint: "
            << format_double(report.trace_reference - report.trace_sum, "%.4f")
            << "\n"
            << "wrote " << prefix << "_sum.csv, " << prefix
            << "_reference.csv\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Bradley-Terry scores under identifying constraints: fits, standard "
      "errors, confidence intervals, and simulation experiments"};
  app.require_subcommand(1);

  // fit
  std::string fit_input;
  ConstraintSpec fit_constraint;
  double fit_multiplier = 2.0;
  std::string fit_format = "table";
  std::string fit_out;
  auto* fit = app.add_subcommand("fit", "Fit scores from a comparison CSV");
  fit->add_option("input", fit_input, "CSV file (winner,loser,count)")
      ->required();
  fit->add_option("--constraint", fit_constraint.raw,
                  "sum | ref:<label> | alpha:<v1,v2,...>");
  fit->add_option("--ci-multiplier", fit_multiplier,
                  "half width in standard errors");
  fit->add_option("--format", fit_format, "table | csv | json");
  fit->add_option("--out", fit_out, "also write the report to this file");

  // check
  std::string check_input;
  std::string check_format = "table";
  std::string check_out;
  auto* check =
      app.add_subcommand("check", "Connectivity diagnosis of a comparison CSV");
  check->add_option("input", check_input, "CSV file (winner,loser,count)")
      ->required();
  check->add_option("--format", check_format, "table | csv | json");
  check->add_option("--out", check_out, "also write the report to this file");

  // simulate
  std::string sim_experiment = "coverage";
  int sim_n = 5;
  long sim_subjects = 2000;
  std::string sim_ladder = "50,200,800,3200";
  int sim_replications = -1;
  std::string sim_dist = "fixed:5";
  double sim_multiplier = 2.0;
  std::uint64_t sim_seed = 1;
  std::string sim_out = "btrank_sim";
  auto* simulate = app.add_subcommand(
      "simulate", "Monte Carlo consistency / coverage experiments");
  simulate->add_option("--experiment", sim_experiment,
                       "coverage | consistency");
  simulate->add_option("--n", sim_n, "number of objects");
  simulate->add_option("--subjects", sim_subjects, "subjects (coverage)");
  simulate->add_option("--ladder", sim_ladder,
                       "comma-separated subject counts (consistency)");
  simulate->add_option("--replications", sim_replications,
                       "replications (default 1000 coverage, 200 consistency)");
  simulate->add_option("--dist", sim_dist,
                       "comparisons per subject: fixed:k | poisson:l | "
                       "uniform:a,b");
  simulate->add_option("--multiplier", sim_multiplier, "CI multiplier");
  simulate->add_option("--seed", sim_seed, "RNG seed");
  simulate->add_option("--out", sim_out, "output CSV prefix");

  // demo
  std::uint64_t demo_seed = btrank::kDemoDefaultSeed;
  std::string demo_out = "demo";
  auto* demo = app.add_subcommand(
      "demo", "Uncertainty-concentration demo with plot-ready CSV output");
  demo->add_option("--seed", demo_seed, "RNG seed");
  demo->add_option("--out", demo_out, "output CSV prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error);
    return code == 0 ? kExitOk : kExitUsage;  // --help exits 0
  }

  try {
    if (fit->parsed()) {
      return cmd_fit(fit_input, fit_constraint, fit_multiplier, fit_format,
                     fit_out);
    }
    if (check->parsed()) {
      return cmd_check(check_input, check_format, check_out);
    }
    if (simulate->parsed()) {
      if (sim_replications < 0) {
        sim_replications = sim_experiment == "consistency" ? 200 : 1000;
      }
      return cmd_simulate(sim_experiment, sim_n, sim_subjects, sim_ladder,
                          sim_replications, sim_dist, sim_multiplier, sim_seed,
                          sim_out);
    }
    if (demo->parsed()) {
      return cmd_demo(demo_seed, demo_out);
    }
  } catch (const UsageError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitUsage;
  } catch (const btrank::NotConnectedError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitModel;
  } catch (const btrank::DegenerateConstraintError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitModel;
  } catch (const btrank::ParseError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitUsage;
  } catch (const btrank::IoError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitUsage;
  } catch (const btrank::InvalidSpecError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitUsage;
  } catch (const btrank::Error& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
