// Command-line front end: builds synthetic datasets, optimizes kernel
// parameters, evaluates and queries saved models, and inspects traces.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qgp/bayesopt.hpp"
#include "qgp/dataset_io.hpp"
#include "qgp/experiments.hpp"
#include "qgp/gp.hpp"
#include "qgp/quantum_kernel.hpp"
#include "qgp/types.hpp"

namespace {

using qgp::format_double;

std::vector<double> parse_csv_doubles(const std::string& text) {
  std::vector<double> values;
  std::string::size_type start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const std::string field = comma == std::string::npos
                                  ? text.substr(start)
                                  : text.substr(start, comma - start);
    values.push_back(qgp::parse_double(field));
    if (comma == std::string::npos) {
      break;
    }
    start = comma + 1;
  }
  return values;
}

qgp::InputVector to_input(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
}

struct OptimizeOptions {
  std::string data_path;
  std::string kernel = "entangled";
  int train_n = 0;
  double energy_min = -std::numeric_limits<double>::infinity();
  double energy_max = std::numeric_limits<double>::infinity();
  int bo_iters = 50;
  int bo_init = 20;
  double kappa = 1.0;
  double offset_a = 1.0;
  double sigma2 = 0.0;
  std::uint64_t seed = 0;
  std::string model_out;
  std::string trace_out;
  std::string report_out;
  std::string pred_out;
};

void echo_config(const qgp::RunConfig& cfg, const std::string& data_path) {
  std::cout << "config: data=" << data_path
            << " kernel=" << qgp::to_string(cfg.kernel_kind)
            << " train_n=" << cfg.train_n
            << " energy_min=" << format_double(cfg.window.lo)
            << " energy_max=" << format_double(cfg.window.hi)
            << " bo_init=" << cfg.bo_init << " bo_iters=" << cfg.bo_iters
            << " kappa=" << format_double(cfg.kappa)
            << " a=" << format_double(cfg.objective_offset_a)
            << " sigma2=" << format_double(cfg.noise_var)
            << " seed=" << cfg.seed << "\n";
}

int run_synth(const std::string& out_path, int n, std::uint64_t seed) {
  std::cout << "config: out=" << out_path << " n=" << n << " seed=" << seed
            << "\n";
  const qgp::Dataset data = qgp::synth_dataset(n, seed);
  qgp::save_dataset_csv(data, out_path);
  std::cout << "wrote " << data.size() << " points to " << out_path << "\n";
  return 0;
}

int run_optimize(const OptimizeOptions& opt) {
  qgp::RunConfig cfg;
  cfg.seed = opt.seed;
  cfg.train_n = opt.train_n;
  cfg.window = qgp::EnergyWindow{opt.energy_min, opt.energy_max};
  cfg.kernel_kind = qgp::kernel_kind_from_string(opt.kernel);
  cfg.bo_init = opt.bo_init;
  cfg.bo_iters = opt.bo_iters;
  cfg.kappa = opt.kappa;
  cfg.objective_offset_a = opt.offset_a;
  cfg.noise_var = opt.sigma2;
  cfg.validate();
  echo_config(cfg, opt.data_path);

  const qgp::Dataset data = qgp::load_dataset_csv(opt.data_path);
  const auto [data_lo, data_hi] = data.energy_range();
  const bool full_range =
      cfg.window.contains(data_lo) && cfg.window.contains(data_hi);

  qgp::ExperimentReport report = full_range
                                     ? qgp::run_interpolation(data, cfg)
                                     : qgp::run_extrapolation(data, cfg);
  report.trace_file = opt.trace_out;

  if (!opt.model_out.empty()) {
    qgp::save_model_json(report.model, opt.model_out);
  }
  if (!opt.trace_out.empty()) {
    qgp::save_trace_csv(report.trace,
                        qgp::theta_space(cfg.kernel_kind, data.dimension),
                        opt.trace_out);
  }
  if (!opt.report_out.empty()) {
    qgp::save_report_json(report, opt.report_out);
  }
  if (!opt.pred_out.empty()) {
    // Re-derive the split so the dump covers exactly the held-out points.
    qgp::Rng split_rng = qgp::Rng(cfg.seed).derive(0);
    const auto [train, test] = qgp::split_train_test(data, cfg, split_rng);
    qgp::save_predictions_csv(report.model, test, opt.pred_out);
  }

  std::cout << "n_train=" << report.n_train << " n_test=" << report.n_test
            << "\n";
  std::cout << "best_theta=";
  for (std::size_t i = 0; i < report.best_theta.size(); ++i) {
    std::cout << (i ? "," : "") << format_double(report.best_theta[i]);
  }
  std::cout << "\n";
  std::cout << "lml=" << format_double(report.lml_at_best)
            << " objective=" << format_double(report.objective_at_best)
            << "\n";
  std::cout << "rmse=" << format_double(report.rmse_value)
            << " rmse_init_best=" << format_double(report.rmse_init_best)
            << "\n";
  std::cout << "wall_seconds=" << report.wall_seconds << "\n";
  return 0;
}

int run_evaluate(const std::string& model_path, const std::string& data_path,
                 int train_n, double energy_min, double energy_max,
                 std::uint64_t seed, bool have_split,
                 const std::string& pred_out, const std::string& report_out) {
  std::cout << "config: model=" << model_path << " data=" << data_path;
  if (have_split) {
    std::cout << " train_n=" << train_n
              << " energy_min=" << format_double(energy_min)
              << " energy_max=" << format_double(energy_max)
              << " seed=" << seed;
  }
  std::cout << "\n";

  const qgp::GPModel model = qgp::load_model_json(model_path);
  const qgp::Dataset data = qgp::load_dataset_csv(data_path);
  if (data.dimension != model.dimension()) {
    throw qgp::DimensionMismatch("model dimension " +
                                 std::to_string(model.dimension()) +
                                 " does not match dataset dimension " +
                                 std::to_string(data.dimension));
  }

  qgp::Dataset scored = data;
  if (have_split) {
    qgp::RunConfig cfg;
    cfg.seed = seed;
    cfg.train_n = train_n;
    cfg.window = qgp::EnergyWindow{energy_min, energy_max};
    cfg.kernel_kind = model.kernel.kind;
    qgp::Rng split_rng = qgp::Rng(seed).derive(0);
    const auto [train, test] = qgp::split_train_test(data, cfg, split_rng);
    scored = test;
  }
  if (scored.points.empty()) {
    throw qgp::EmptyInput("no points to score");
  }

  std::vector<qgp::InputVector> xs;
  std::vector<double> targets;
  for (const qgp::DataPoint& p : scored.points) {
    xs.push_back(p.x);
    targets.push_back(p.energy);
  }
  const auto preds = qgp::gp_predict_batch(model, xs);
  std::vector<double> means;
  means.reserve(preds.size());
  for (const auto& p : preds) {
    means.push_back(p.mean);
  }
  const double err = qgp::rmse(means, targets);

  if (!pred_out.empty()) {
    qgp::save_predictions_csv(model, scored, pred_out);
  }
  if (!report_out.empty()) {
    nlohmann::json j;  // small ad-hoc document; full reports come from optimize
    j["format"] = "qgp-evaluation";
    j["model"] = model_path;
    j["data"] = data_path;
    j["n_scored"] = scored.size();
    j["rmse"] = err;
    std::ofstream out(report_out, std::ios::binary);
    if (!out) {
      throw qgp::IoError("cannot open " + report_out + " for writing");
    }
    out << j.dump(2) << '\n';
  }

  std::cout << "n_scored=" << scored.size() << " rmse=" << format_double(err)
            << "\n";
  return 0;
}

int run_predict(const std::string& model_path, const std::string& x_text) {
  std::cout << "config: model=" << model_path << " x=" << x_text << "\n";
  const qgp::GPModel model = qgp::load_model_json(model_path);
  std::vector<double> values;
  try {
    values = parse_csv_doubles(x_text);
  } catch (const qgp::ParseError& e) {
    throw qgp::InvalidArgument(std::string("bad input point: ") + e.what());
  }
  if (static_cast<int>(values.size()) != model.dimension()) {
    throw qgp::DimensionMismatch(
        "input has " + std::to_string(values.size()) +
        " components, model expects " + std::to_string(model.dimension()));
  }
  const qgp::Prediction pred = qgp::gp_predict(model, to_input(values));
  std::cout << "mean=" << format_double(pred.mean)
            << " stddev=" << format_double(std::sqrt(pred.variance)) << "\n";
  return 0;
}

int run_kernel(const std::string& x_text, const std::string& xp_text,
               const std::string& theta_text, double theta_pair,
               bool unentangled, bool abs_pair_diff, std::int64_t shots,
               std::uint64_t seed) {
  std::vector<double> x, xp, theta;
  try {
    x = parse_csv_doubles(x_text);
    xp = parse_csv_doubles(xp_text);
    theta = parse_csv_doubles(theta_text);
  } catch (const qgp::ParseError& e) {
    throw qgp::InvalidArgument(std::string("bad vector: ") + e.what());
  }
  qgp::QuantumKernelParams params;
  params.theta_single = theta;
  params.theta_pair = theta_pair;
  params.entangled = !unentangled;
  params.abs_pair_diff = abs_pair_diff;

  std::cout << "config: x=" << x_text << " xp=" << xp_text
            << " theta=" << theta_text
            << " theta_pair=" << format_double(theta_pair)
            << " entangled=" << (params.entangled ? "true" : "false")
            << " abs_pair_diff=" << (abs_pair_diff ? "true" : "false");
  if (shots > 0) {
    std::cout << " shots=" << shots << " seed=" << seed;
  }
  std::cout << "\n";

  const double exact = qgp::kernel_exact(to_input(x), to_input(xp), params);
  std::cout << "kernel_exact=" << format_double(exact) << "\n";
  if (shots > 0) {
    qgp::Rng rng(seed);
    const double estimate =
        qgp::kernel_shots(to_input(x), to_input(xp), params, shots, rng);
    std::cout << "kernel_shots=" << format_double(estimate) << "\n";
  }
  return 0;
}

int run_trace(const std::string& path, bool curve) {
  std::cout << "config: in=" << path << "\n";
  const qgp::BOTrace trace = qgp::load_trace_csv(path);
  const qgp::Evaluation& best = trace.best();
  std::cout << "evaluations=" << trace.evaluations.size() << "\n";
  std::cout << "best_objective=" << format_double(best.objective)
            << " best_lml=" << format_double(best.lml) << "\n";
  std::cout << "best_theta=";
  for (std::size_t i = 0; i < best.theta.size(); ++i) {
    std::cout << (i ? "," : "") << format_double(best.theta[i]);
  }
  std::cout << "\n";
  if (curve) {
    for (std::size_t i = 0; i < trace.best_so_far.size(); ++i) {
      std::cout << i << ',' << format_double(trace.best_so_far[i]) << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian-process regression of potential energy surfaces "
               "with simulated quantum kernels"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand(
      "synth", "Generate a synthetic 6-D potential energy dataset");
  std::string synth_out;
  int synth_n = 0;
  std::uint64_t synth_seed = 0;
  synth->add_option("--out", synth_out, "Output CSV path")->required();
  synth->add_option("--n", synth_n, "Number of points")->required();
  synth->add_option("--seed", synth_seed, "RNG seed");

  // optimize
  auto* optimize =
      app.add_subcommand("optimize",
                         "Optimize kernel parameters on a dataset and fit "
                         "the final model");
  OptimizeOptions opt;
  optimize->add_option("--data", opt.data_path, "Dataset CSV")->required();
  optimize->add_option("--kernel", opt.kernel,
                       "Kernel kind: entangled, unentangled, or rbf");
  optimize->add_option("--train-n", opt.train_n, "Training set size")
      ->required();
  optimize->add_option("--energy-min", opt.energy_min,
                       "Lower edge of the training energy window (cm^-1)");
  optimize->add_option("--energy-max", opt.energy_max,
                       "Upper edge of the training energy window (cm^-1)");
  optimize->add_option("--bo-iters", opt.bo_iters, "Optimization iterations");
  optimize->add_option("--bo-init", opt.bo_init, "Random initial draws");
  optimize->add_option("--kappa", opt.kappa, "Exploration weight");
  optimize->add_option("--a", opt.offset_a, "Objective offset");
  optimize->add_option("--sigma2", opt.sigma2, "Data noise variance");
  optimize->add_option("--seed", opt.seed, "RNG seed");
  optimize->add_option("--model-out", opt.model_out, "Model JSON path");
  optimize->add_option("--trace-out", opt.trace_out, "Trace CSV path");
  optimize->add_option("--report-out", opt.report_out, "Report JSON path");
  optimize->add_option("--pred-out", opt.pred_out,
                       "Held-out prediction dump CSV path");

  // evaluate
  auto* evaluate = app.add_subcommand(
      "evaluate", "Score a saved model against a dataset");
  std::string eval_model, eval_data, eval_pred_out, eval_report_out;
  int eval_train_n = 0;
  double eval_energy_min = -std::numeric_limits<double>::infinity();
  double eval_energy_max = std::numeric_limits<double>::infinity();
  std::uint64_t eval_seed = 0;
  evaluate->add_option("--model", eval_model, "Model JSON")->required();
  evaluate->add_option("--data", eval_data, "Dataset CSV")->required();
  auto* eval_train_opt = evaluate->add_option(
      "--train-n", eval_train_n,
      "Reconstruct the train/test split and score only the test part");
  evaluate->add_option("--energy-min", eval_energy_min,
                       "Training window lower edge used for the split");
  evaluate->add_option("--energy-max", eval_energy_max,
                       "Training window upper edge used for the split");
  evaluate->add_option("--seed", eval_seed, "Seed used for the split");
  evaluate->add_option("--pred-out", eval_pred_out, "Prediction dump CSV");
  evaluate->add_option("--report-out", eval_report_out, "Evaluation JSON");

  // predict
  auto* predict = app.add_subcommand(
      "predict", "Predict the energy at one geometry from a saved model");
  std::string pred_model, pred_x;
  predict->add_option("--model", pred_model, "Model JSON")->required();
  predict->add_option("--x", pred_x, "Comma-separated input components")
      ->required();

  // kernel
  auto* kernel = app.add_subcommand(
      "kernel", "Evaluate the quantum kernel for one pair of inputs");
  std::string kx, kxp, ktheta;
  double ktheta_pair = 1.0;
  bool kunent = false, kabs = false;
  std::int64_t kshots = 0;
  std::uint64_t kseed = 0;
  kernel->add_option("--x", kx, "First input, comma-separated")->required();
  kernel->add_option("--xp", kxp, "Second input, comma-separated")->required();
  kernel->add_option("--theta", ktheta, "Single-qubit scales, comma-separated")
      ->required();
  kernel->add_option("--theta-pair", ktheta_pair, "Shared pair scale");
  kernel->add_flag("--unentangled", kunent, "Drop the two-qubit rotations");
  kernel->add_flag("--abs-pair-diff", kabs,
                   "Use |x_i - x_j| in the pair phases");
  kernel->add_option("--shots", kshots, "Also estimate from this many shots");
  kernel->add_option("--seed", kseed, "Shot-sampling seed");

  // trace
  auto* trace = app.add_subcommand("trace", "Summarize an optimization trace");
  std::string trace_in;
  bool trace_curve = false;
  trace->add_option("--in", trace_in, "Trace CSV")->required();
  trace->add_flag("--curve", trace_curve, "Print the running-best curve");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (synth->parsed()) {
      if (synth_n < 1) {
        throw qgp::InvalidArgument("--n must be at least 1");
      }
      return run_synth(synth_out, synth_n, synth_seed);
    }
    if (optimize->parsed()) {
      return run_optimize(opt);
    }
    if (evaluate->parsed()) {
      return run_evaluate(eval_model, eval_data, eval_train_n,
                          eval_energy_min, eval_energy_max, eval_seed,
                          eval_train_opt->count() > 0, eval_pred_out,
                          eval_report_out);
    }
    if (predict->parsed()) {
      return run_predict(pred_model, pred_x);
    }
    if (kernel->parsed()) {
      return run_kernel(kx, kxp, ktheta, ktheta_pair, kunent, kabs, kshots,
                        kseed);
    }
    if (trace->parsed()) {
      return run_trace(trace_in, trace_curve);
    }
  } catch (const qgp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
