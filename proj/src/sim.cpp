// Copyright 2026 The clde Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "clde/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "clde/estimator.hpp"
#include "clde/lyapunov.hpp"

namespace clde {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Vector add_measurement_noise(const Vector& x, double variance,
                             std::mt19937_64& rng) {
  if (!(variance >= 0.0)) {
    throw ContractError("add_measurement_noise: variance must be >= 0");
  }
  if (variance == 0.0) return x;
  std::normal_distribution<double> dist(0.0, std::sqrt(variance));
  Vector out = x;
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) += dist(rng);
  return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined key.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

constexpr std::uint64_t kNoiseStream = 1;
constexpr std::uint64_t kStackStream = 2;

enum class LogDetail { kFull, kEstimateOnly };

class Runner {
 public:
  Runner(const SimConfig& cfg, LogDetail detail)
      : cfg_(cfg),
        detail_(detail),
        arm_(cfg.plant),
        theta_(cfg.plant.theta_true),
        controller_theta_(cfg.controller_theta.size() == 4
                              ? cfg.controller_theta
                              : cfg.plant.theta_true),
        gamma_inverse_(cfg.estimator.gamma.inverse()),
        noise_rng_(derive_seed(cfg.seed, kNoiseStream)),
        noise_dist_(0.0, std::sqrt(cfg.noise_variance)),
        noise_(Vector::Zero(4)),
        rk4_(16) {
    validate(cfg);
    x_s_.resize(4);
    x_meas_.resize(4);
    x_tilde_.resize(4);
    x_hat_dot_.resize(4);
    mu_dot_.resize(4);
    theta_hat_.resize(4);
    obs_.x_hat.resize(4);
    obs_.mu.resize(4);
    log_.theta_true = theta_;
    log_.gamma = cfg.estimator.gamma;
    log_.alpha1 = cfg.observer.alpha1;
    log_.gamma1 = cfg.observer.gamma1;
    log_.method = to_string(cfg.method);
  }

  TrajectoryLog run() {
    const SimConfig& cfg = cfg_;
    HistoryStack initial = initialize_active_stack(
        arm_, cfg.theta_hat0, cfg.purge.capacity,
        derive_seed(cfg.seed, kStackStream));
    purge_.emplace(std::move(initial), cfg.purge);
    refresh_cl_terms();
    log_.stacks.push_back(summarize_active(0.0, 0));

    std::optional<NumericalDifferentiator> diff;
    std::vector<Vector> u_ring;
    if (cfg.method == Method::kNumericalDifferentiation) {
      diff.emplace(cfg.baseline.window, cfg.baseline.order,
                   cfg.baseline.smoothing);
      u_ring.assign(cfg.baseline.window, Vector::Zero(2));
    }

    const auto steps = static_cast<long long>(std::llround(cfg.duration / cfg.dt));
    const long long log_every =
        std::max(1LL, static_cast<long long>(std::llround(cfg.log_period / cfg.dt)));

    Vector z(16);
    z.segment(0, 4) = cfg.x0;
    draw_noise();
    z.segment(4, 4) = cfg.x0 + noise_;  // x_hat(0) = first measurement
    z.segment(8, 4).setZero();
    z.segment(12, 4) = cfg.theta_hat0;

    double last_record = 0.0;
    for (long long k = 0;; ++k) {
      const double t = static_cast<double>(k) * cfg.dt;
      if (k > 0) draw_noise();
      x_s_ = z.segment(0, 4);
      x_meas_ = x_s_ + noise_;
      const Vector u = excitation_controller(t, x_s_, cfg.controller, arm_,
                                             controller_theta_);

      if (diff) {
        diff->push(t, x_meas_);
        u_ring[static_cast<std::size_t>(k) % cfg.baseline.window] = u;
      }

      if (k > 0 && sampling_gate(last_record, t, cfg.purge.record_period)) {
        std::optional<DataPoint> point;
        if (!diff) {
          observer_point(z, u, t, point);
        } else if (diff->ready()) {
          const std::size_t w = cfg.baseline.window;
          const long long mid_step =
              k - static_cast<long long>(w) + 1 +
              static_cast<long long>(diff->midpoint_index());
          point = DataPoint{*diff->estimate_at_midpoint(),
                            diff->raw(diff->midpoint_index()),
                            u_ring[static_cast<std::size_t>(mid_step) % w],
                            diff->midpoint_time()};
        }
        if (point) {
          last_record = t;
          try_insert(purge_->auxiliary, *point, arm_);
          const std::size_t aux_size = purge_->auxiliary.size();
          if (maybe_purge(*purge_, t)) {
            refresh_cl_terms();
            log_.switch_times.push_back(t);
            log_.stacks.push_back(summarize_active(t, aux_size));
          }
        }
      }

      if (k % log_every == 0) record(t, z, u);
      if (k == steps) break;

      try {
        rk4_.step([&](double ts, const Vector& zs,
                      Vector& dz) { derivative(ts, zs, dz); },
                  t, z, cfg.dt);
      } catch (const IntegrationError& e) {
        throw DivergenceError("non-finite state during integration at t=" +
                                  format_double(e.time()),
                              std::move(log_));
      }
      const double theta_norm = z.segment(12, 4).norm();
      if (!z.allFinite() || theta_norm > 10.0 * cfg.estimator.theta_bound) {
        throw DivergenceError("run diverged at t=" + format_double(t + cfg.dt) +
                                  " (||theta_hat||=" +
                                  format_double(theta_norm) + ")",
                              std::move(log_));
      }
    }
    return std::move(log_);
  }

 private:
  void draw_noise() {
    if (cfg_.noise_variance == 0.0) return;
    for (int i = 0; i < 4; ++i) noise_(i) = noise_dist_(noise_rng_);
  }

  void refresh_cl_terms() {
    const HistoryStack& h = purge_->active;
    k_gamma_gram_ = cfg_.estimator.k * (cfg_.estimator.gamma * h.gram());
    k_gamma_target_ = cfg_.estimator.k * (cfg_.estimator.gamma * h.target());
  }

  StackSummary summarize_active(double t, std::size_t aux_size) const {
    const HistoryStack& h = purge_->active;
    StackSummary s;
    s.t = t;
    s.s = purge_->switch_index;
    s.sigma_min = h.min_singular_value();
    s.lambda_min = min_eigenvalue_symmetric(h.gram());
    s.norm_A = spectral_norm(h.gram());
    s.norm_Q = compute_Q(h, theta_, arm_).norm();
    s.aux_size = aux_size;
    return s;
  }

  void load_observer(const Vector& z) {
    obs_.x_hat = z.segment(4, 4);
    obs_.mu = z.segment(8, 4);
    theta_hat_ = z.segment(12, 4);
  }

  const PlantTerms& measurement_terms() {
    if (cfg_.noise_variance == 0.0) return truth_terms_;
    arm_.evaluate(x_meas_, meas_terms_);
    return meas_terms_;
  }

  void derivative(double t, const Vector& z, Vector& dz) {
    x_s_ = z.segment(0, 4);
    x_meas_ = x_s_ + noise_;
    const Vector u =
        excitation_controller(t, x_s_, cfg_.controller, arm_, controller_theta_);
    arm_.evaluate(x_s_, truth_terms_);
    dz.segment(0, 4) = truth_terms_.drift;
    dz.segment(0, 4).noalias() += truth_terms_.input_matrix * u;
    dz.segment(0, 4).noalias() += truth_terms_.regressor * theta_;

    const PlantTerms& meas = measurement_terms();
    load_observer(z);
    observer_rates(obs_, x_meas_, u, theta_hat_, cfg_.observer, meas,
                   x_hat_dot_, mu_dot_);
    dz.segment(4, 4) = x_hat_dot_;
    dz.segment(8, 4) = mu_dot_;
    x_tilde_ = x_meas_ - obs_.x_hat;
    dz.segment(12, 4) = k_gamma_target_;
    dz.segment(12, 4).noalias() -= k_gamma_gram_ * theta_hat_;
    dz.segment(12, 4).noalias() +=
        cfg_.estimator.gamma * (meas.regressor.transpose() * x_tilde_);
  }

  // Observer derivative estimate at the current step as a data point.
  void observer_point(const Vector& z, const Vector& u, double t,
                      std::optional<DataPoint>& point) {
    arm_.evaluate(x_meas_, meas_terms_);
    load_observer(z);
    observer_rates(obs_, x_meas_, u, theta_hat_, cfg_.observer, meas_terms_,
                   x_hat_dot_, mu_dot_);
    point = DataPoint{x_hat_dot_, x_meas_, u, t};
  }

  void record(double t, const Vector& z, const Vector& u) {
    LogRow row;
    row.t = t;
    row.s = purge_->switch_index;
    row.theta_hat = z.segment(12, 4);
    row.sigma_min_active = purge_->active.min_singular_value();
    if (detail_ == LogDetail::kFull) {
      row.x = z.segment(0, 4);
      row.x_meas = row.x + noise_;
      row.x_hat = z.segment(4, 4);
      row.u = u;
      const PlantTerms truth = arm_.terms(row.x);
      row.x_dot = truth.drift + truth.input_matrix * u + truth.regressor * theta_;
      const PlantTerms meas = arm_.terms(row.x_meas);
      load_observer(z);
      observer_rates(obs_, row.x_meas, u, theta_hat_, cfg_.observer, meas,
                     x_hat_dot_, mu_dot_);
      row.x_hat_dot = x_hat_dot_;
      row.x_tilde = row.x - row.x_hat;

      const Vector x_tilde_dot = row.x_dot - row.x_hat_dot;
      const Vector r =
          filtered_error(row.x_tilde, x_tilde_dot, cfg_.observer.alpha1);
      const Vector theta_tilde = theta_ - row.theta_hat;
      LyapunovSample ls;
      ls.t = t;
      ls.s = row.s;
      ls.V = compute_V_with_inverse(r, row.x_tilde, theta_tilde, gamma_inverse_);
      ls.V_r = compute_Vr(r, row.x_tilde);
      ls.norm_theta_tilde = theta_tilde.norm();
      ls.norm_x_tilde = row.x_tilde.norm();
      ls.norm_r = r.norm();
      ls.norm_x_tilde_dot = x_tilde_dot.norm();
      log_.lyapunov.push_back(ls);
    }
    log_.rows.push_back(std::move(row));
  }

  const SimConfig& cfg_;
  LogDetail detail_;
  TwoLinkArm arm_;
  Vector theta_;
  Vector controller_theta_;
  Matrix gamma_inverse_;
  std::mt19937_64 noise_rng_;
  std::normal_distribution<double> noise_dist_;
  Vector noise_;
  Rk4Workspace rk4_;
  std::optional<PurgeState> purge_;
  Matrix k_gamma_gram_;
  Vector k_gamma_target_;
  PlantTerms truth_terms_, meas_terms_;
  ObserverState obs_;
  Vector x_s_, x_meas_, x_tilde_, x_hat_dot_, mu_dot_, theta_hat_;
  TrajectoryLog log_;
};

TrajectoryLog run(const SimConfig& cfg, LogDetail detail) {
  Runner runner(cfg, detail);
  return runner.run();
}

}  // namespace

TrajectoryLog run_experiment(const SimConfig& cfg) {
  return run(cfg, LogDetail::kFull);
}

double rms_steady_state_error(const TrajectoryLog& log, double window) {
  if (log.rows.empty()) throw ContractError("rms_steady_state_error: empty log");
  const double t_end = log.rows.back().t;
  const double span = t_end - log.rows.front().t;
  if (!(window > 0.0) || window > span * (1.0 + 1e-12)) {
    throw ContractError("rms_steady_state_error: window exceeds the log span");
  }
  const double start = t_end - window;
  double sum = 0.0;
  std::size_t count = 0;
  for (const LogRow& row : log.rows) {
    if (row.t < start - 1e-9 * window) continue;
    sum += (row.theta_hat - log.theta_true).squaredNorm();
    ++count;
  }
  return std::sqrt(sum / static_cast<double>(count));
}

double final_relative_error(const TrajectoryLog& log) {
  if (log.rows.empty()) throw ContractError("final_relative_error: empty log");
  return (log.rows.back().theta_hat - log.theta_true).norm() /
         log.theta_true.norm();
}

const ComparisonCell& ComparisonTable::cell(Method method,
                                            double variance) const {
  for (const ComparisonCell& c : cells) {
    if (c.method == method && c.variance == variance) return c;
  }
  throw ContractError("ComparisonTable: no such cell");
}

namespace {

struct Setting {
  std::size_t cell = 0;
  SimConfig cfg;  // seed is the first trial's
};

struct JobResult {
  double rms = std::numeric_limits<double>::infinity();
  std::string error;
};

}  // namespace

ComparisonTable compare_methods(const SimConfig& base,
                                const std::vector<double>& variances,
                                int trials) {
  if (trials < 1) throw ContractError("compare_methods: trials must be >= 1");
  validate(base);
  ComparisonTable table;
  table.variances = variances;
  std::vector<Setting> settings;
  for (Method method :
       {Method::kNumericalDifferentiation, Method::kDynamicObserver}) {
    for (double variance : variances) {
      if (!(variance >= 0.0)) {
        throw ContractError("compare_methods: variances must be >= 0");
      }
      ComparisonCell cell;
      cell.method = method;
      cell.variance = variance;
      cell.best_rms = std::numeric_limits<double>::infinity();
      cell.trials = trials;
      const std::size_t index = table.cells.size();
      table.cells.push_back(cell);

      std::vector<std::size_t> windows{base.baseline.window};
      std::vector<int> orders{base.baseline.order};
      if (method == Method::kNumericalDifferentiation) {
        windows = base.sweep.windows;
        orders = base.sweep.orders;
      }
      for (double k : base.sweep.k) {
        for (double xi : base.sweep.xi) {
          for (std::size_t w : windows) {
            for (int d : orders) {
              Setting setting;
              setting.cell = index;
              setting.cfg = base;
              setting.cfg.method = method;
              setting.cfg.noise_variance = variance;
              setting.cfg.estimator.k = k;
              setting.cfg.purge.xi = xi;
              setting.cfg.baseline.window = w;
              setting.cfg.baseline.order = d;
              settings.push_back(std::move(setting));
            }
          }
        }
      }
    }
  }

  const auto per_setting = static_cast<std::size_t>(trials);
  std::vector<JobResult> results(settings.size() * per_setting);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= results.size()) return;
      SimConfig cfg = settings[i / per_setting].cfg;
      cfg.seed = base.seed + static_cast<std::uint64_t>(i % per_setting);
      try {
        const TrajectoryLog log = run(cfg, LogDetail::kEstimateOnly);
        results[i].rms = rms_steady_state_error(log, cfg.steady_state_window);
      } catch (const Error& e) {
        results[i].error = e.what();
      }
    }
  };
  const int threads = std::max(1, base.sweep.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  for (std::size_t si = 0; si < settings.size(); ++si) {
    ComparisonCell& cell = table.cells[settings[si].cell];
    bool failed = false;
    double sum_sq = 0.0;
    for (std::size_t trial = 0; trial < per_setting; ++trial) {
      const JobResult& r = results[si * per_setting + trial];
      ++cell.runs;
      if (!r.error.empty()) {
        ++cell.failed_runs;
        cell.errors.push_back(r.error);
        failed = true;
        continue;
      }
      sum_sq += r.rms * r.rms;
    }
    if (failed) continue;
    const double pooled = std::sqrt(sum_sq / static_cast<double>(per_setting));
    if (pooled < cell.best_rms) {
      const SimConfig& c = settings[si].cfg;
      cell.best_rms = pooled;
      cell.k = c.estimator.k;
      cell.xi = c.purge.xi;
      cell.window = c.baseline.window;
      cell.order = c.baseline.order;
    }
  }
  return table;
}

namespace {

void vector_header(std::ostream& os, const char* name, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) os << ',' << name << '_' << i + 1;
}

void vector_values(std::ostream& os, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) os << ',' << format_double(v(i));
}

}  // namespace

void write_log_csv(std::ostream& os, const TrajectoryLog& log) {
  os << "t,s";
  if (!log.rows.empty()) {
    const LogRow& r = log.rows.front();
    vector_header(os, "x", r.x);
    vector_header(os, "x_meas", r.x_meas);
    vector_header(os, "x_hat", r.x_hat);
    vector_header(os, "x_dot", r.x_dot);
    vector_header(os, "x_hat_dot", r.x_hat_dot);
    vector_header(os, "u", r.u);
    vector_header(os, "theta_hat", r.theta_hat);
    vector_header(os, "x_tilde", r.x_tilde);
  }
  os << ",sigma_min_active\n";
  for (const LogRow& r : log.rows) {
    os << format_double(r.t) << ',' << r.s;
    vector_values(os, r.x);
    vector_values(os, r.x_meas);
    vector_values(os, r.x_hat);
    vector_values(os, r.x_dot);
    vector_values(os, r.x_hat_dot);
    vector_values(os, r.u);
    vector_values(os, r.theta_hat);
    vector_values(os, r.x_tilde);
    os << ',' << format_double(r.sigma_min_active) << '\n';
  }
}

void write_switch_csv(std::ostream& os, const TrajectoryLog& log) {
  os << "t,s,sigma_min,lambda_min,norm_A,norm_Q,aux_size\n";
  for (const StackSummary& s : log.stacks) {
    os << format_double(s.t) << ',' << s.s << ',' << format_double(s.sigma_min)
       << ',' << format_double(s.lambda_min) << ',' << format_double(s.norm_A)
       << ',' << format_double(s.norm_Q) << ',' << s.aux_size << '\n';
  }
}

void write_lyapunov_csv(std::ostream& os, const TrajectoryLog& log) {
  os << "t,s,V,V_r,norm_theta_tilde,norm_x_tilde,norm_r,norm_x_tilde_dot\n";
  for (const LyapunovSample& l : log.lyapunov) {
    os << format_double(l.t) << ',' << l.s << ',' << format_double(l.V) << ','
       << format_double(l.V_r) << ',' << format_double(l.norm_theta_tilde)
       << ',' << format_double(l.norm_x_tilde) << ','
       << format_double(l.norm_r) << ',' << format_double(l.norm_x_tilde_dot)
       << '\n';
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(line);
  while (std::getline(ss, item, ',')) out.push_back(item);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    throw Error("CSV is missing column '" + name + "'");
  }

  // Columns name_1, name_2, ... in order.
  std::vector<int> group(const std::string& name) const {
    std::vector<int> out;
    for (int i = 1;; ++i) {
      const std::string col = name + "_" + std::to_string(i);
      const auto it = std::find(header.begin(), header.end(), col);
      if (it == header.end()) break;
      out.push_back(static_cast<int>(it - header.begin()));
    }
    return out;
  }
};

CsvTable read_csv(std::istream& is) {
  CsvTable table;
  std::string line;
  if (!std::getline(is, line)) throw Error("CSV input is empty");
  table.header = split_csv_line(line);
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != table.header.size()) {
      throw Error("CSV line " + std::to_string(line_no) +
                  " has the wrong number of fields");
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const std::string& c : cells) {
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (c.empty() || end != c.c_str() + c.size()) {
        throw Error("CSV line " + std::to_string(line_no) + ": bad number '" +
                    c + "'");
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

Vector gather(const std::vector<double>& row, const std::vector<int>& cols) {
  Vector v(static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = row[static_cast<std::size_t>(cols[i])];
  }
  return v;
}

}  // namespace

std::vector<LogRow> read_log_csv(std::istream& is) {
  const CsvTable table = read_csv(is);
  const int t = table.column("t");
  const int s = table.column("s");
  const int sigma = table.column("sigma_min_active");
  const auto x = table.group("x");
  const auto x_meas = table.group("x_meas");
  const auto x_hat = table.group("x_hat");
  const auto x_dot = table.group("x_dot");
  const auto x_hat_dot = table.group("x_hat_dot");
  const auto u = table.group("u");
  const auto theta_hat = table.group("theta_hat");
  const auto x_tilde = table.group("x_tilde");
  std::vector<LogRow> rows;
  rows.reserve(table.rows.size());
  for (const auto& r : table.rows) {
    LogRow row;
    row.t = r[static_cast<std::size_t>(t)];
    row.s = static_cast<int>(r[static_cast<std::size_t>(s)]);
    row.x = gather(r, x);
    row.x_meas = gather(r, x_meas);
    row.x_hat = gather(r, x_hat);
    row.x_dot = gather(r, x_dot);
    row.x_hat_dot = gather(r, x_hat_dot);
    row.u = gather(r, u);
    row.theta_hat = gather(r, theta_hat);
    row.x_tilde = gather(r, x_tilde);
    row.sigma_min_active = r[static_cast<std::size_t>(sigma)];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<StackSummary> read_switch_csv(std::istream& is) {
  const CsvTable table = read_csv(is);
  const int t = table.column("t");
  const int s = table.column("s");
  const int sigma = table.column("sigma_min");
  const int lambda = table.column("lambda_min");
  const int norm_a = table.column("norm_A");
  const int norm_q = table.column("norm_Q");
  const int aux = table.column("aux_size");
  std::vector<StackSummary> out;
  for (const auto& r : table.rows) {
    StackSummary st;
    st.t = r[static_cast<std::size_t>(t)];
    st.s = static_cast<int>(r[static_cast<std::size_t>(s)]);
    st.sigma_min = r[static_cast<std::size_t>(sigma)];
    st.lambda_min = r[static_cast<std::size_t>(lambda)];
    st.norm_A = r[static_cast<std::size_t>(norm_a)];
    st.norm_Q = r[static_cast<std::size_t>(norm_q)];
    st.aux_size = static_cast<std::size_t>(r[static_cast<std::size_t>(aux)]);
    out.push_back(st);
  }
  return out;
}

std::vector<LyapunovSample> read_lyapunov_csv(std::istream& is) {
  const CsvTable table = read_csv(is);
  const int cols[] = {table.column("t"),
                      table.column("s"),
                      table.column("V"),
                      table.column("V_r"),
                      table.column("norm_theta_tilde"),
                      table.column("norm_x_tilde"),
                      table.column("norm_r"),
                      table.column("norm_x_tilde_dot")};
  std::vector<LyapunovSample> out;
  for (const auto& r : table.rows) {
    const auto at = [&](int i) { return r[static_cast<std::size_t>(cols[i])]; };
    out.push_back({at(0), static_cast<int>(at(1)), at(2), at(3), at(4), at(5),
                   at(6), at(7)});
  }
  return out;
}

void write_comparison_csv(std::ostream& os, const ComparisonTable& table) {
  os << "method,variance,best_rms,k,xi,window,order,trials,runs,failed_runs\n";
  for (const ComparisonCell& c : table.cells) {
    os << to_string(c.method) << ',' << format_double(c.variance) << ','
       << format_double(c.best_rms) << ',' << format_double(c.k) << ','
       << format_double(c.xi) << ',' << c.window << ',' << c.order << ','
       << c.trials << ',' << c.runs << ',' << c.failed_runs << '\n';
  }
}

std::string render_comparison(const ComparisonTable& table) {
  std::ostringstream os;
  os << "RMS steady-state parameter error\n";
  os << std::left << std::setw(28) << "method";
  for (double v : table.variances) {
    std::ostringstream label;
    label << "variance " << v;
    os << std::setw(18) << label.str();
  }
  os << '\n';
  for (Method method :
       {Method::kNumericalDifferentiation, Method::kDynamicObserver}) {
    os << std::setw(28) << to_string(method);
    for (double v : table.variances) {
      const ComparisonCell& c = table.cell(method, v);
      std::ostringstream value;
      value << std::setprecision(4) << c.best_rms;
      os << std::setw(18) << value.str();
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace clde
