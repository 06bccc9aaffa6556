#include "qgp/bayesopt.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "qgp/dataset_io.hpp"

namespace qgp {

namespace {

constexpr int kAcquisitionCandidates = 2048;
constexpr double kSurrogateNoise = 1e-6;

// Length-scale grid for the surrogate RBF kernel, log-spaced. Surrogate
// inputs live in the unit cube, so this brackets everything from nearly
// flat to fairly local covariance.
const double kSurrogateThetaGrid[] = {0.02, 0.05, 0.1, 0.2, 0.5,
                                      1.0,  2.0, 4.0, 8.0};

InputVector to_vec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
}

/// Surrogate over unit-cube inputs. Targets are normalized to unit range
/// before the fit so the exploration term keeps the same weight whatever
/// the objective's scale (the posterior deviation of a unit-amplitude prior
/// tops out near one); the normalization is monotone, so the acquisition
/// argmax is unchanged.
GPModel fit_surrogate(const std::vector<std::vector<double>>& unit_points,
                      const std::vector<double>& objectives) {
  std::vector<InputVector> x;
  x.reserve(unit_points.size());
  for (const auto& p : unit_points) {
    x.push_back(to_vec(p));
  }

  double mean = 0.0;
  for (double v : objectives) mean += v;
  mean /= static_cast<double>(objectives.size());
  double var = 0.0;
  for (double v : objectives) var += (v - mean) * (v - mean);
  var /= static_cast<double>(objectives.size());
  double scale = std::sqrt(var);
  if (!(scale > 1e-12)) {
    scale = 1.0;
  }
  std::vector<double> y_std(objectives.size());
  for (std::size_t i = 0; i < objectives.size(); ++i) {
    y_std[i] = objectives[i] / scale;
  }

  GPModel best_model;
  double best_lml = -std::numeric_limits<double>::infinity();
  for (double theta : kSurrogateThetaGrid) {
    GPModel m;
    try {
      m = gp_fit(x, y_std, KernelConfig::make_rbf(theta), kSurrogateNoise);
    } catch (const FactorizationFailure&) {
      continue;
    }
    const double lml = log_marginal_likelihood(m, y_std);
    if (lml > best_lml) {
      best_lml = lml;
      best_model = std::move(m);
    }
  }
  if (best_model.x_train.empty()) {
    throw FactorizationFailure("no surrogate length scale could be factorized");
  }
  return best_model;
}

}  // namespace

void SearchSpace::validate() const {
  if (bounds.empty()) {
    throw InvalidArgument("search space must have at least one dimension");
  }
  if (names.size() != bounds.size()) {
    throw SizeMismatch("search space has " + std::to_string(names.size()) +
                       " names for " + std::to_string(bounds.size()) +
                       " dimensions");
  }
  for (const auto& [lo, hi] : bounds) {
    if (!(lo < hi)) {
      throw InvalidArgument("search bounds require lo < hi");
    }
    if (log_scale && !(lo > 0.0)) {
      throw InvalidArgument("log-scale bounds must be positive");
    }
  }
}

std::vector<double> SearchSpace::sample(Rng& rng) const {
  std::vector<double> unit(dim());
  for (double& u : unit) {
    u = rng.uniform01();
  }
  return from_unit(unit);
}

std::vector<double> SearchSpace::to_unit(const std::vector<double>& theta) const {
  if (theta.size() != dim()) {
    throw SizeMismatch("point dimension does not match search space");
  }
  std::vector<double> unit(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    const auto [lo, hi] = bounds[i];
    unit[i] = log_scale
                  ? (std::log(theta[i]) - std::log(lo)) /
                        (std::log(hi) - std::log(lo))
                  : (theta[i] - lo) / (hi - lo);
  }
  return unit;
}

std::vector<double> SearchSpace::from_unit(const std::vector<double>& unit) const {
  if (unit.size() != dim()) {
    throw SizeMismatch("point dimension does not match search space");
  }
  std::vector<double> theta(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    const auto [lo, hi] = bounds[i];
    theta[i] = log_scale
                   ? std::exp(std::log(lo) +
                              unit[i] * (std::log(hi) - std::log(lo)))
                   : lo + unit[i] * (hi - lo);
  }
  return theta;
}

SearchSpace SearchSpace::box(std::vector<std::string> names, double lo,
                             double hi, bool log_scale) {
  SearchSpace space;
  space.bounds.assign(names.size(), {lo, hi});
  space.names = std::move(names);
  space.log_scale = log_scale;
  space.validate();
  return space;
}

std::size_t BOTrace::best_index() const {
  if (evaluations.empty()) {
    throw EmptyInput("trace has no evaluations");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < evaluations.size(); ++i) {
    if (evaluations[i].objective > evaluations[best].objective) {
      best = i;
    }
  }
  return best;
}

double acquisition(const GPModel& surrogate, const InputVector& x,
                   double kappa) {
  if (surrogate.n() < 2) {
    throw InvalidArgument("acquisition needs a surrogate with >= 2 points");
  }
  const Prediction pred = gp_predict(surrogate, x);
  return pred.mean + kappa * std::sqrt(pred.variance);
}

std::vector<double> propose_next(const GPModel& surrogate,
                                 const SearchSpace& space, double kappa,
                                 Rng& rng) {
  space.validate();
  std::vector<std::vector<double>> candidates(kAcquisitionCandidates);
  for (auto& c : candidates) {
    c = space.sample(rng);
  }

  std::vector<double> scores(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    scores[i] = acquisition(surrogate, to_vec(space.to_unit(candidates[i])),
                            kappa);
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) {  // strict: ties keep the lowest index
      best = i;
    }
  }
  return candidates[best];
}

BOTrace optimize(const ObjectiveFn& objective, const SearchSpace& space,
                 int init_count, int iterations, double kappa, Rng& rng) {
  space.validate();
  if (init_count < 2) {
    throw InvalidArgument("init_count must be at least 2");
  }
  if (iterations < 0) {
    throw InvalidArgument("iterations must be non-negative");
  }
  if (kappa < 0.0) {
    throw InvalidArgument("kappa must be non-negative");
  }

  BOTrace trace;
  trace.seed = rng.seed();
  trace.kappa = kappa;

  std::map<std::vector<double>, ObjectiveOutcome> cache;
  double worst_valid = std::numeric_limits<double>::quiet_NaN();

  auto evaluate_at = [&](const std::vector<double>& theta) {
    Evaluation ev;
    ev.theta = theta;
    const auto hit = cache.find(theta);
    if (hit != cache.end()) {
      ev.objective = hit->second.objective;
      ev.lml = hit->second.lml;
    } else {
      try {
        const ObjectiveOutcome out = objective(theta);
        if (!std::isfinite(out.objective)) {
          throw ObjectiveFailure("objective returned a non-finite value");
        }
        ev.objective = out.objective;
        ev.lml = out.lml;
        cache.emplace(theta, out);
      } catch (const FactorizationFailure&) {
        ev.failed = true;
      } catch (const ObjectiveFailure&) {
        ev.failed = true;
      }
      if (ev.failed) {
        ev.objective = std::isnan(worst_valid) ? -1.0 : worst_valid - 1.0;
        ev.lml = std::numeric_limits<double>::quiet_NaN();
      }
    }
    if (!ev.failed &&
        (std::isnan(worst_valid) || ev.objective < worst_valid)) {
      worst_valid = ev.objective;
    }
    trace.evaluations.push_back(std::move(ev));
    const double obj = trace.evaluations.back().objective;
    trace.best_so_far.push_back(
        trace.best_so_far.empty() ? obj
                                  : std::max(trace.best_so_far.back(), obj));
  };

  for (int i = 0; i < init_count; ++i) {
    evaluate_at(space.sample(rng));
  }

  for (int iter = 0; iter < iterations; ++iter) {
    std::vector<std::vector<double>> unit_points;
    std::vector<double> objectives;
    unit_points.reserve(trace.evaluations.size());
    objectives.reserve(trace.evaluations.size());
    for (const Evaluation& ev : trace.evaluations) {
      unit_points.push_back(space.to_unit(ev.theta));
      objectives.push_back(ev.objective);
    }
    const GPModel surrogate = fit_surrogate(unit_points, objectives);
    evaluate_at(propose_next(surrogate, space, kappa, rng));
  }

  return trace;
}

void save_trace_csv(const BOTrace& trace, const SearchSpace& space,
                    const std::filesystem::path& path) {
  std::ostringstream out;
  out << "iter";
  for (const std::string& name : space.names) {
    out << ',' << name;
  }
  out << ",objective,lml,best_so_far\n";
  for (std::size_t i = 0; i < trace.evaluations.size(); ++i) {
    const Evaluation& ev = trace.evaluations[i];
    out << i;
    for (double t : ev.theta) {
      out << ',' << format_double(t);
    }
    out << ',' << format_double(ev.objective) << ','
        << format_double(ev.lml) << ',' << format_double(trace.best_so_far[i])
        << '\n';
  }

  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  file << out.str();
  if (!file) {
    throw IoError("failed writing " + path.string());
  }
}

BOTrace load_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open trace file " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("trace file " + path.string() + " is empty");
  }
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      header.push_back(field);
    }
  }
  if (header.size() < 4 || header.front() != "iter" ||
      header.back() != "best_so_far") {
    throw ParseError("unrecognized trace header in " + path.string());
  }
  const std::size_t theta_dims = header.size() - 4;

  BOTrace trace;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) {
      fields.push_back(field);
    }
    if (fields.size() != header.size()) {
      throw ParseError("trace row width mismatch in " + path.string());
    }
    Evaluation ev;
    for (std::size_t i = 0; i < theta_dims; ++i) {
      ev.theta.push_back(parse_double(fields[1 + i]));
    }
    ev.objective = parse_double(fields[1 + theta_dims]);
    ev.lml = parse_double(fields[2 + theta_dims]);
    trace.evaluations.push_back(std::move(ev));
    trace.best_so_far.push_back(parse_double(fields[3 + theta_dims]));
  }
  if (trace.evaluations.empty()) {
    throw ParseError("trace file " + path.string() + " has no rows");
  }
  return trace;
}

}  // namespace qgp
