#pragma once

// Stationary-diffusion consensus graph learning.
//
// Every view v contributes a learned graph H_v = P_v W P_v^T built from its
// normalized kernel graph P_v and the single parameter matrix W shared by all
// views. The consensus H = alpha * sum_v H_v + (1 - alpha) I is pushed towards
// a stationary state of every renormalized view graph Phat_v by minimizing
//
//   L(W) = sum_v Tr(H^T (I - Phat_v) H) + mu * sum_v Tr(H_v^T H_v).
//
// The factorization H_v = (P_v W1)(P_v W2)^T reads as a query/key attention
// map with W = W1 W2^T; only the product W is trained.
//
// W is updated by plain gradient descent followed by a projection onto
// symmetric nonnegative matrices, so every H_v stays a valid graph.

#include <cmath>
#include <cstdint>
#include <sstream>
#include <utility>
#include <vector>

#include "sdsne/dataset.hpp"
#include "sdsne/error.hpp"
#include "sdsne/graphs.hpp"
#include "sdsne/types.hpp"

namespace sdsne {

struct SdsneConfig {
  double alpha = 0.5;
  double mu = 1.0;
  double learning_rate = 1e-4;
  int max_epochs = 1000;
  int patience = 10;
  std::uint64_t seed = 42;
  int layers = 1;
  bool cross_view = false;
  double convergence_tol = 1e-8;
  // Stop once a single epoch cuts the loss by more than half.
  bool stop_on_cliff = false;
  // Graph construction.
  double sigma = kDefaultSigma;
  int knn = 0;

  void validate() const {
    auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidConfig, what); };
    if (!(alpha >= 0.0 && alpha <= 1.0)) fail("alpha must lie in [0, 1]");
    if (!(mu >= 0.0)) fail("mu must be nonnegative");
    if (!(learning_rate > 0.0)) fail("learning_rate must be positive");
    if (max_epochs < 0) fail("max_epochs must be nonnegative");
    if (patience < 1) fail("patience must be positive");
    if (layers < 1) fail("layers must be positive");
    if (!(convergence_tol > 0.0)) fail("convergence_tol must be positive");
    if (!(sigma > 0.0)) throw Error(ErrorKind::NonPositiveSigma, "sigma must be positive");
    if (knn < 0) fail("knn must be nonnegative");
  }
};

enum class StopReason { MaxEpochs, Patience, Cliff };

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::MaxEpochs: return "max_epochs";
    case StopReason::Patience: return "patience";
    case StopReason::Cliff: return "cliff";
  }
  return "unknown";
}

template <typename Scalar>
struct SdsneModel {
  std::vector<Mat<Scalar>> weights;  // one per layer; weights[0] is the shared W
  std::vector<Mat<Scalar>> per_view_outputs;
  Mat<Scalar> consensus;
  std::vector<Scalar> loss_history;  // entry 0 is the initial evaluation
  int epochs_run = 0;
  StopReason stop_reason = StopReason::MaxEpochs;

  const Mat<Scalar>& W() const { return weights.front(); }
  Scalar final_loss() const { return loss_history.back(); }
};

namespace detail {

inline void require_dims(Index a, Index b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": " << a << " vs " << b;
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
}

template <typename Scalar>
void require_square_same(const Mat<Scalar>& a, const Mat<Scalar>& b, const char* what) {
  require_dims(a.rows(), a.cols(), what);
  require_dims(b.rows(), b.cols(), what);
  require_dims(a.rows(), b.rows(), what);
}

template <typename Scalar>
bool all_finite(const Mat<Scalar>& m) {
  return m.allFinite();
}

}  // namespace detail

/// H_v = P W P^T.
template <typename Scalar>
Mat<Scalar> layer_forward(const Mat<Scalar>& p, const Mat<Scalar>& w) {
  detail::require_square_same(p, w, "layer_forward");
  return p * w * p.transpose();
}

template <typename Scalar>
Mat<Scalar> layer_forward(const TransitionGraph<Scalar>& p, const Mat<Scalar>& w) {
  return layer_forward(p.normalized, w);
}

/// P_v S P_u^T, the cross-view diffusion of a shared graph S.
template <typename Scalar>
Mat<Scalar> cross_view_forward(const Mat<Scalar>& pv, const Mat<Scalar>& pu, const Mat<Scalar>& s) {
  detail::require_square_same(pv, s, "cross_view_forward");
  detail::require_square_same(pu, s, "cross_view_forward");
  return pv * s * pu.transpose();
}

/// H_l = H_{l-1} W_l H_{l-1}^T for layers after the first.
template <typename Scalar>
Mat<Scalar> multilayer_forward(const Mat<Scalar>& h_prev, const Mat<Scalar>& w_l) {
  detail::require_square_same(h_prev, w_l, "multilayer_forward");
  return h_prev * w_l * h_prev.transpose();
}

/// alpha * sum_v H_v + (1 - alpha) I.
template <typename Scalar>
Mat<Scalar> fuse(const std::vector<Mat<Scalar>>& views, Scalar alpha) {
  if (views.empty()) throw Error(ErrorKind::EmptyViewList, "fuse needs at least one view");
  if (!(alpha >= Scalar(0) && alpha <= Scalar(1))) throw Error(ErrorKind::InvalidConfig, "alpha must lie in [0, 1]");
  const Index n = views.front().rows();
  Mat<Scalar> sum = Mat<Scalar>::Zero(n, n);
  for (const auto& h : views) {
    detail::require_square_same(sum, h, "fuse");
    sum += h;
  }
  return alpha * sum + (Scalar(1) - alpha) * Mat<Scalar>::Identity(n, n);
}

/// Symmetric normalization of a learned view graph.
template <typename Scalar>
TransitionGraph<Scalar> renormalize(const Mat<Scalar>& h_v) {
  return sym_normalize(h_v);
}

template <typename Scalar>
struct LossTerms {
  Scalar stationary;      // sum_v Tr(H^T (I - Phat_v) H)
  Scalar regularization;  // mu * sum_v Tr(H_v^T H_v)
  Scalar total() const { return stationary + regularization; }
};

namespace detail {

/// Tolerated negative excursion of the PSD trace term.
inline constexpr double kPsdSlack = 1e-9;

template <typename Scalar>
LossTerms<Scalar> loss_terms(const Mat<Scalar>& h, const std::vector<const Mat<Scalar>*>& phat,
                             const std::vector<Mat<Scalar>>& views, Scalar mu) {
  require_dims(static_cast<Index>(phat.size()), static_cast<Index>(views.size()), "view list lengths");
  LossTerms<Scalar> terms{Scalar(0), Scalar(0)};
  for (std::size_t v = 0; v < phat.size(); ++v) {
    require_square_same(h, *phat[v], "total_loss");
    require_square_same(h, views[v], "total_loss");
    terms.stationary += h.cwiseProduct(h - (*phat[v]) * h).sum();
    terms.regularization += views[v].squaredNorm();
  }
  terms.regularization *= mu;
  if (!std::isfinite(terms.stationary) || !std::isfinite(terms.regularization))
    throw Error(ErrorKind::NonFiniteLoss, "loss evaluated to a non-finite value");
  if (terms.stationary < -Scalar(kPsdSlack)) {
    std::ostringstream os;
    os << "stationary term " << terms.stationary << " is negative";
    throw Error(ErrorKind::InvariantViolation, os.str());
  }
  return terms;
}

}  // namespace detail

/// sum_v Tr(H^T (I - Phat_v) H) + mu * sum_v Tr(H_v^T H_v).
template <typename Scalar>
Scalar total_loss(const Mat<Scalar>& h, const std::vector<TransitionGraph<Scalar>>& phat,
                  const std::vector<Mat<Scalar>>& views, Scalar mu) {
  std::vector<const Mat<Scalar>*> ptrs;
  for (const auto& g : phat) ptrs.push_back(&g.normalized);
  return detail::loss_terms(h, ptrs, views, mu).total();
}

/// The training objective over a fixed set of view transition matrices.
/// Evaluates the forward pass and its exact gradient with respect to every
/// layer's parameter matrix, including the path through the degree-dependent
/// normalization of each learned view graph.
template <typename Scalar>
class Objective {
 public:
  struct ViewState {
    std::vector<Mat<Scalar>> layer_inputs;  // input of layer l >= 1 is layer_inputs[l]
    Mat<Scalar> output;                     // final H_v
    Mat<Scalar> renormalized;               // Phat_v
    Vec<Scalar> inv_sqrt_degree;
    std::vector<Index> clamped;
  };

  struct State {
    std::vector<ViewState> views;
    Mat<Scalar> consensus;
    LossTerms<Scalar> loss;

    std::vector<Mat<Scalar>> outputs() const {
      std::vector<Mat<Scalar>> out;
      for (const auto& v : views) out.push_back(v.output);
      return out;
    }
  };

  Objective(std::vector<Mat<Scalar>> transitions, const SdsneConfig& config)
      : transitions_(std::move(transitions)), config_(config) {
    config_.validate();
    if (transitions_.empty()) throw Error(ErrorKind::EmptyViewList, "objective needs at least one view");
    for (const auto& p : transitions_) detail::require_square_same(transitions_.front(), p, "view transition");
  }

  Index size() const { return transitions_.front().rows(); }
  std::size_t view_count() const { return transitions_.size(); }
  const SdsneConfig& config() const { return config_; }

  /// View u paired with view v in the cross-view schedule.
  std::size_t partner(std::size_t v) const { return config_.cross_view ? (v + 1) % transitions_.size() : v; }

  State forward(const std::vector<Mat<Scalar>>& weights) const {
    check_weights(weights);
    State state;
    std::vector<Mat<Scalar>> outputs;
    for (std::size_t v = 0; v < transitions_.size(); ++v) {
      ViewState vs;
      const Mat<Scalar>& pv = transitions_[v];
      Mat<Scalar> h;
      if (config_.cross_view) {
        const Mat<Scalar> raw = cross_view_forward(pv, transitions_[partner(v)], weights[0]);
        h = Scalar(0.5) * (raw + raw.transpose());
      } else {
        h = layer_forward(pv, weights[0]);
      }
      for (std::size_t l = 1; l < weights.size(); ++l) {
        vs.layer_inputs.push_back(h);
        h = multilayer_forward(vs.layer_inputs.back(), weights[l]);
      }
      Vec<Scalar> degrees;
      vs.inv_sqrt_degree = sdsne::detail::inv_sqrt_degrees(h, degrees, &vs.clamped);
      vs.renormalized = sdsne::detail::scale_symmetric(h, vs.inv_sqrt_degree);
      vs.output = std::move(h);
      outputs.push_back(vs.output);
      state.views.push_back(std::move(vs));
    }
    state.consensus = fuse(outputs, Scalar(config_.alpha));
    std::vector<const Mat<Scalar>*> phat;
    for (const auto& vs : state.views) phat.push_back(&vs.renormalized);
    state.loss = detail::loss_terms(state.consensus, phat, outputs, Scalar(config_.mu));
    return state;
  }

  Scalar loss(const std::vector<Mat<Scalar>>& weights) const { return forward(weights).loss.total(); }

  /// dL/dW_l for every layer, given a state produced by forward(weights).
  std::vector<Mat<Scalar>> gradient(const std::vector<Mat<Scalar>>& weights, const State& state) const {
    const Index n = size();
    const Scalar alpha(config_.alpha), mu(config_.mu);
    const Mat<Scalar>& h = state.consensus;

    // Consensus gradient from every stationary term.
    Mat<Scalar> grad_h = Mat<Scalar>::Zero(n, n);
    for (const auto& vs : state.views) {
      const Mat<Scalar> lap_h = h - vs.renormalized * h;
      grad_h += lap_h + (h - vs.renormalized.transpose() * h);
    }
    const Mat<Scalar> grad_phat = -(h * h.transpose());

    std::vector<Mat<Scalar>> grads;
    for (const auto& w : weights) grads.push_back(Mat<Scalar>::Zero(w.rows(), w.cols()));

    for (std::size_t v = 0; v < state.views.size(); ++v) {
      const ViewState& vs = state.views[v];
      const Vec<Scalar>& s = vs.inv_sqrt_degree;
      Mat<Scalar> g = alpha * grad_h + Scalar(2) * mu * vs.output;

      // Phat = diag(s) H_v diag(s), s_i = d_i^{-1/2}, d = H_v 1.
      const Mat<Scalar> gh = grad_phat.cwiseProduct(vs.output);
      const Vec<Scalar> grad_s = gh * s + gh.transpose() * s;
      Vec<Scalar> grad_d = -Scalar(0.5) * grad_s.cwiseProduct(s.cwiseProduct(s).cwiseProduct(s));
      for (Index i : vs.clamped) grad_d(i) = Scalar(0);
      g += grad_phat.cwiseProduct(s * s.transpose());
      g.colwise() += grad_d;

      for (std::size_t l = weights.size(); l-- > 1;) {
        const Mat<Scalar>& a = vs.layer_inputs[l - 1];
        grads[l] += a.transpose() * g * a;
        g = g * a * weights[l].transpose() + g.transpose() * a * weights[l];
      }

      const Mat<Scalar>& pv = transitions_[v];
      if (config_.cross_view) {
        const Mat<Scalar>& pu = transitions_[partner(v)];
        grads[0] += Scalar(0.5) * (pv.transpose() * (g + g.transpose()) * pu);
      } else {
        grads[0] += pv.transpose() * g * pv;
      }
    }
    for (const auto& gr : grads)
      if (!detail::all_finite(gr)) throw Error(ErrorKind::NonFiniteGradient, "gradient has non-finite entries");
    return grads;
  }

  std::vector<Mat<Scalar>> gradient(const std::vector<Mat<Scalar>>& weights) const {
    return gradient(weights, forward(weights));
  }

  std::vector<Mat<Scalar>> initial_weights() const {
    return std::vector<Mat<Scalar>>(static_cast<std::size_t>(config_.layers), Mat<Scalar>::Identity(size(), size()));
  }

 private:
  void check_weights(const std::vector<Mat<Scalar>>& weights) const {
    detail::require_dims(static_cast<Index>(weights.size()), config_.layers, "layer count");
    for (const auto& w : weights) detail::require_square_same(transitions_.front(), w, "parameter matrix");
  }

  std::vector<Mat<Scalar>> transitions_;
  SdsneConfig config_;
};

/// dL/dW for the single-layer model.
template <typename Scalar>
Mat<Scalar> grad_w(const Mat<Scalar>& w, const std::vector<TransitionGraph<Scalar>>& views, SdsneConfig config) {
  config.layers = 1;
  std::vector<Mat<Scalar>> ps;
  for (const auto& g : views) ps.push_back(g.normalized);
  const Objective<Scalar> objective(std::move(ps), config);
  return objective.gradient({w}).front();
}

/// W <- sym(max(W, 0)).
template <typename Scalar>
void project_symmetric_nonnegative(Mat<Scalar>& w) {
  w = w.cwiseMax(Scalar(0));
  w = Scalar(0.5) * (w + w.transpose()).eval();
}

namespace detail {

inline constexpr double kSymmetrySlack = 1e-10;

template <typename Scalar>
void check_view_invariants(const typename Objective<Scalar>::State& state, int epoch) {
  for (std::size_t v = 0; v < state.views.size(); ++v) {
    const auto& h = state.views[v].output;
    const Scalar asym = max_asymmetry(h);
    if (asym > Scalar(kSymmetrySlack) || h.minCoeff() < Scalar(0)) {
      std::ostringstream os;
      os << "epoch " << epoch << ", view " << v << ": asymmetry " << asym << ", min entry " << h.minCoeff();
      throw Error(ErrorKind::InvariantViolation, os.str());
    }
  }
}

}  // namespace detail

/// Projected gradient descent on W from W_0 = I. Stops at max_epochs, after
/// `patience` epochs without improving the best loss by convergence_tol, or
/// (opt-in) on a single-epoch drop of more than half the loss.
template <typename Scalar>
SdsneModel<Scalar> fit(const std::vector<TransitionGraph<Scalar>>& graphs, const SdsneConfig& config) {
  config.validate();
  if (graphs.empty()) throw Error(ErrorKind::EmptyViewList, "fit needs at least one view");
  std::vector<Mat<Scalar>> ps;
  for (const auto& g : graphs) {
    if (g.size() != graphs.front().size()) throw Error(ErrorKind::ViewRowMismatch, "view graphs differ in size");
    ps.push_back(g.normalized);
  }
  const Objective<Scalar> objective(std::move(ps), config);

  SdsneModel<Scalar> model;
  model.weights = objective.initial_weights();
  auto state = objective.forward(model.weights);
  detail::check_view_invariants<Scalar>(state, 0);
  model.loss_history.push_back(state.loss.total());

  Scalar best = state.loss.total();
  int stale = 0;
  const Scalar lr(config.learning_rate);
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const auto grads = objective.gradient(model.weights, state);
    for (std::size_t l = 0; l < grads.size(); ++l) {
      model.weights[l] -= lr * grads[l];
      project_symmetric_nonnegative(model.weights[l]);
    }
    try {
      state = objective.forward(model.weights);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NonFiniteLoss) throw;
      throw Error(ErrorKind::NonFiniteLoss, "epoch " + std::to_string(epoch) + ": " + e.what());
    }
    detail::check_view_invariants<Scalar>(state, epoch);

    const Scalar previous = model.loss_history.back();
    const Scalar current = state.loss.total();
    model.loss_history.push_back(current);
    model.epochs_run = epoch;

    if (config.stop_on_cliff && previous - current > Scalar(0.5) * std::abs(previous)) {
      model.stop_reason = StopReason::Cliff;
      break;
    }
    if (current < best - Scalar(config.convergence_tol)) {
      best = current;
      stale = 0;
    } else if (++stale >= config.patience) {
      model.stop_reason = StopReason::Patience;
      break;
    }
  }
  model.per_view_outputs = state.outputs();
  model.consensus = std::move(state.consensus);
  return model;
}

/// Builds one Gaussian graph per view and trains on them.
template <typename Scalar = double>
SdsneModel<Scalar> fit(const MultiviewDataset& data, const SdsneConfig& config) {
  config.validate();
  data.validate();
  std::vector<TransitionGraph<Scalar>> graphs;
  for (const auto& x : data.views)
    graphs.push_back(gaussian_affinity(x.template cast<Scalar>().eval(), Scalar(config.sigma), config.knn));
  return fit(graphs, config);
}

}  // namespace sdsne
