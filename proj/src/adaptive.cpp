#include "mkldd/adaptive.hpp"

#include <cmath>
#include <ostream>

#include "mkldd/error.hpp"
#include "text_util.hpp"

namespace mkldd {

const char* mode_name(AdaptMode mode) { return mode == AdaptMode::kMSmkl ? "m" : "s"; }

AdaptMode parse_mode(const std::string& text) {
  if (text == "m" || text == "M" || text == "m-smkl") return AdaptMode::kMSmkl;
  if (text == "s" || text == "S" || text == "s-smkl") return AdaptMode::kSSmkl;
  throw ConfigError("unknown adaptation mode '" + text + "'");
}

const char* stop_name(AdaptStop s) {
  switch (s) {
    case AdaptStop::kConstraintsMet:
      return "constraints-met";
    case AdaptStop::kSigmaBound:
      return "sigma-bound";
    case AdaptStop::kMaxIter:
      break;
  }
  return "max-iter";
}

ClassStats class_stats(const Eigen::MatrixXd& x, std::span<const int> y) {
  if (x.rows() != static_cast<Eigen::Index>(y.size())) throw ConfigError("class_stats: size mismatch");
  const auto p = static_cast<std::size_t>(x.cols());
  ClassStats s;
  s.u1.assign(p, 0.0);
  s.u2.assign(p, 0.0);
  s.sum_sq_1.assign(p, 0.0);
  s.sum_sq_2.assign(p, 0.0);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const bool normal = y[static_cast<std::size_t>(i)] > 0;
    auto& u = normal ? s.u1 : s.u2;
    auto& sq = normal ? s.sum_sq_1 : s.sum_sq_2;
    (normal ? s.n1 : s.n2) += 1;
    for (std::size_t j = 0; j < p; ++j) {
      const double v = x(i, static_cast<Eigen::Index>(j));
      u[j] += v;
      sq[j] += v * v;
    }
  }
  if (s.n1 == 0 || s.n2 == 0) throw DataError("class_stats: both classes are required");
  for (std::size_t j = 0; j < p; ++j) {
    s.u1[j] /= static_cast<double>(s.n1);
    s.u2[j] /= static_cast<double>(s.n2);
  }
  return s;
}

ClassStats class_stats(std::span<const LabeledSample> samples) {
  return class_stats(to_matrix(samples), to_labels(samples));
}

double compute_M(std::span<const double> w, const ClassStats& stats) {
  double m = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double t = w[j] * (stats.u1[j] - stats.u2[j]);
    m += t * t;
  }
  return m;
}

double compute_S(std::span<const double> w, const Eigen::MatrixXd& x, std::span<const int> y,
                 const ClassStats& stats) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const auto& u = y[static_cast<std::size_t>(i)] > 0 ? stats.u1 : stats.u2;
    for (std::size_t j = 0; j < w.size(); ++j) {
      const double t = w[j] * (x(i, static_cast<Eigen::Index>(j)) - u[j]);
      s += t * t;
    }
  }
  return s;
}

std::vector<double> grad_M(std::span<const double> w, const ClassStats& stats) {
  std::vector<double> g(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double diff = stats.u1[j] - stats.u2[j];
    g[j] = 2.0 * w[j] * diff * diff;
  }
  return g;
}

std::vector<double> grad_S(std::span<const double> w, const ClassStats& stats) {
  std::vector<double> g(w.size());
  const double n1 = static_cast<double>(stats.n1);
  const double n2 = static_cast<double>(stats.n2);
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double scatter1 = stats.sum_sq_1[j] - n1 * stats.u1[j] * stats.u1[j];
    const double scatter2 = stats.sum_sq_2[j] - n2 * stats.u2[j] * stats.u2[j];
    g[j] = 2.0 * (w[j] * scatter1 + w[j] * scatter2);
  }
  return g;
}

WeightAdaptConfig WeightAdaptConfig::m_defaults() { return WeightAdaptConfig{}; }

WeightAdaptConfig WeightAdaptConfig::s_defaults() {
  WeightAdaptConfig c;
  c.lr2 = 2e-2;
  return c;
}

void WeightAdaptConfig::validate() const {
  if (!(lr1 > 0.0) || !(lr2 > 0.0)) throw ConfigError("learning rates must be positive");
  if (!(t1 <= t2 && t2 <= t3)) throw ConfigError("require t1 <= t2 <= t3");
  if (!(t4 <= t5 && t5 <= t6)) throw ConfigError("require t4 <= t5 <= t6");
  if (max_iter < 1) throw ConfigError("max_iter must be at least 1");
  if (init_w.size() != kFeatureDim) throw ConfigError("init_w must have one entry per feature");
  for (double w : init_w) {
    if (!(w > 0.0) || !std::isfinite(w)) throw ConfigError("init_w entries must be positive");
  }
}

std::vector<double> update_weights(std::span<const double> w, std::span<const double> grad_m,
                                   std::span<const double> grad_s, const WeightAdaptConfig& cfg) {
  std::vector<double> out(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double raw = w[j] + 2.0 * cfg.lr1 * grad_m[j] - 2.0 * cfg.lr2 * grad_s[j];
    out[j] = raw > 0.0 ? raw : kWeightFloor;
  }
  return out;
}

namespace {

bool ratio_exceeds(double num, double den, double bound) {
  if (std::abs(den) < 1e-12) return true;
  return num / den > bound;
}

}  // namespace

bool stop_check(AdaptMode mode, std::span<const double> m_hist, std::span<const double> s_hist,
                const WeightAdaptConfig& cfg) {
  if (m_hist.size() < 3 || s_hist.size() < 3) return false;
  const std::size_t next = m_hist.size() - 1;
  const std::size_t cur = next - 1;
  const std::size_t prev = cur - 1;
  const double m_prev = m_hist[prev], m_cur = m_hist[cur], m_next = m_hist[next];
  const double s_prev = s_hist[prev], s_cur = s_hist[cur], s_next = s_hist[next];

  bool corridor = false;
  double p_back = 0.0;
  double p_fwd = 0.0;
  if (mode == AdaptMode::kMSmkl) {
    const double fwd = std::abs(m_next - m_cur);
    const double back = std::abs(m_cur - m_prev);
    corridor = cfg.t1 < fwd && fwd < cfg.t2 && cfg.t2 < back && back < cfg.t3;
    p_back = cfg.p1;
    p_fwd = cfg.p2;
  } else {
    const double back = std::abs(s_cur - s_prev);
    const double fwd = std::abs(s_next - s_cur);
    corridor = cfg.t4 < back && back < cfg.t5 && cfg.t5 < fwd && fwd < cfg.t6;
    p_back = cfg.p3;
    p_fwd = cfg.p4;
  }
  return corridor && ratio_exceeds(m_cur - m_prev, s_cur - s_prev, p_back) &&
         ratio_exceeds(m_cur - m_next, s_cur - s_next, p_fwd);
}

AdaptiveResult train_adaptive(const Eigen::MatrixXd& x, std::span<const int> y,
                              const std::vector<KernelSpec>& kernels, double C,
                              const WeightAdaptConfig& cfg, AdaptMode mode, const MklOptions& mkl) {
  cfg.validate();
  if (static_cast<Eigen::Index>(cfg.init_w.size()) != x.cols()) {
    throw ConfigError("init_w length does not match the feature dimension");
  }
  const ClassStats stats = class_stats(x, y);

  AdaptiveResult result;
  auto& st = result.state;
  std::vector<double> w = cfg.init_w;
  bool have_model = false;

  while (true) {
    MklModel model = simple_mkl_train(x, y, kernels, C, mkl, w);
    const double m = compute_M(w, stats);
    const double s = compute_S(w, x, y, stats);
    if (!(m < cfg.sigma1) || !(s > cfg.sigma2)) {
      // Keep the last iterate that satisfied the bounds.
      if (!have_model) {
        result.model = std::move(model);
        st.w = w;
      }
      result.stop = AdaptStop::kSigmaBound;
      break;
    }
    ++st.iter;
    st.m_hist.push_back(m);
    st.s_hist.push_back(s);
    st.j_hist.push_back(model.objective);
    st.w_hist.push_back(w);
    st.w = w;
    result.model = std::move(model);
    have_model = true;

    if (stop_check(mode, st.m_hist, st.s_hist, cfg)) {
      result.stop = AdaptStop::kConstraintsMet;
      break;
    }
    if (st.iter >= cfg.max_iter) {
      result.stop = AdaptStop::kMaxIter;
      break;
    }
    w = update_weights(w, grad_M(w, stats), grad_S(w, stats), cfg);
  }
  return result;
}

void write_telemetry_csv(std::ostream& out, const WeightAdaptState& state) {
  const std::size_t p = state.w_hist.empty() ? state.w.size() : state.w_hist.front().size();
  out << "iter,M,S";
  for (std::size_t j = 0; j < p; ++j) out << ",w" << (j + 1);
  out << ",J\n";
  for (std::size_t k = 0; k < state.m_hist.size(); ++k) {
    out << (k + 1) << ',' << detail::format_double(state.m_hist[k]) << ','
        << detail::format_double(state.s_hist[k]);
    for (double w : state.w_hist[k]) out << ',' << detail::format_double(w);
    out << ',' << detail::format_double(state.j_hist[k]) << '\n';
  }
}

}  // namespace mkldd
