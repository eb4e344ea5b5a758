// Bounded-variable primal simplex. Rows are turned into equations with one
// slack each, so the working system is A x = b with every column boxed.
// Infeasible starts (cold or warm) are driven to feasibility by a composite
// phase that minimizes total bound violation of the basic variables; the
// same pivot machinery then minimizes the true objective. The basis inverse
// is an Eigen SparseLU factorization plus a product-form eta file that is
// rebuilt periodically and before reporting results.
#include "psr/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace psr {

namespace {

constexpr double kFeasTol = 1e-8;    // scaled by (1 + |bound|)
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kEtaDrop = 1e-13;
constexpr int kRefactorEvery = 80;
constexpr int kStallLimit = 400;

struct Eta {
  int row = -1;
  double diag = 0.0;                         // w[row]
  std::vector<std::pair<int, double>> off;   // (i, w[i]) for i != row
};

struct Factor {
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  std::vector<Eta> etas;
  bool ok = false;

  void ftran(Eigen::VectorXd& v) const {
    Eigen::VectorXd tmp = lu.solve(v);
    v.swap(tmp);
    for (const auto& e : etas) {
      const double t = v[e.row] / e.diag;
      if (t != 0.0)
        for (const auto& [i, wi] : e.off) v[i] -= wi * t;
      v[e.row] = t;
    }
  }

  // Non-const because SparseLU::transpose() is a non-const member in Eigen.
  void btran(Eigen::VectorXd& v) {
    for (auto it = etas.rbegin(); it != etas.rend(); ++it) {
      double s = v[it->row];
      for (const auto& [i, wi] : it->off) s -= wi * v[i];
      v[it->row] = s / it->diag;
    }
    Eigen::VectorXd tmp = lu.transpose().solve(v);
    v.swap(tmp);
  }
};

enum class FeasState : uint8_t { Ok, BelowLb, AboveUb };

}  // namespace

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
    case LpStatus::IterationLimit: return "IterationLimit";
    case LpStatus::Singular: return "Singular";
  }
  return "?";
}

LpTableau::LpTableau(const MilpInstance& inst) {
  inst.self_check();
  m_ = static_cast<int>(inst.rows.size());
  n_struct_ = static_cast<int>(inst.cols.size());
  n_ = n_struct_ + m_;

  cost_.assign(n_, 0.0);
  lb_.assign(n_, 0.0);
  ub_.assign(n_, 0.0);
  for (int j = 0; j < n_struct_; ++j) {
    cost_[j] = inst.cols[j].cost;
    lb_[j] = inst.cols[j].lb;
    ub_[j] = inst.cols[j].ub;
  }
  rhs_.assign(m_, 0.0);
  for (int i = 0; i < m_; ++i) {
    rhs_[i] = inst.rows[i].rhs;
    const int s = n_struct_ + i;
    switch (inst.rows[i].sense) {
      case RowSense::LE: lb_[s] = 0.0; ub_[s] = kInf; break;
      case RowSense::GE: lb_[s] = -kInf; ub_[s] = 0.0; break;
      case RowSense::EQ: lb_[s] = 0.0; ub_[s] = 0.0; break;
    }
  }

  // Column-major matrix with slacks appended; duplicate (row, col) entries
  // from caller-provided rows are coalesced.
  std::vector<std::tuple<int, int, double>> trips;  // (col, row, val)
  for (int i = 0; i < m_; ++i)
    for (const auto& [j, v] : inst.rows[i].terms)
      if (v != 0.0) trips.emplace_back(j, i, v);
  for (int i = 0; i < m_; ++i) trips.emplace_back(n_struct_ + i, i, 1.0);
  std::sort(trips.begin(), trips.end(),
            [](const auto& a, const auto& b) {
              return std::get<0>(a) != std::get<0>(b)
                         ? std::get<0>(a) < std::get<0>(b)
                         : std::get<1>(a) < std::get<1>(b);
            });
  col_start_.assign(n_ + 1, 0);
  row_index_.reserve(trips.size());
  value_.reserve(trips.size());
  std::size_t k = 0;
  for (int j = 0; j < n_; ++j) {
    col_start_[j] = static_cast<int>(row_index_.size());
    while (k < trips.size() && std::get<0>(trips[k]) == j) {
      const int row = std::get<1>(trips[k]);
      double v = 0.0;
      while (k < trips.size() && std::get<0>(trips[k]) == j &&
             std::get<1>(trips[k]) == row)
        v += std::get<2>(trips[k++]);
      if (v != 0.0) {
        row_index_.push_back(row);
        value_.push_back(v);
      }
    }
  }
  col_start_[n_] = static_cast<int>(row_index_.size());
}

void LpTableau::set_col_bounds(int col, double lb, double ub) {
  if (col < 0 || col >= n_struct_)
    throw std::out_of_range("set_col_bounds: column " + std::to_string(col));
  if (lb > ub)
    throw std::invalid_argument("set_col_bounds: lb > ub");
  lb_[col] = lb;
  ub_[col] = ub;
}

Basis LpTableau::save_basis() const {
  if (has_last_basis_) return last_basis_;
  Basis b;
  b.basic.resize(m_);
  for (int i = 0; i < m_; ++i) b.basic[i] = n_struct_ + i;
  b.at.assign(n_, NonbasicAt::Lower);
  return b;
}

LpResult LpTableau::solve() { return run(Basis{}, false); }

LpResult LpTableau::solve_from(const Basis& start) { return run(start, true); }

LpResult LpTableau::run(Basis basis, bool have_basis) {
  using Eigen::VectorXd;
  LpResult res;

  // Row-free instances are pure box minimization; Eigen's LU cannot
  // factorize an empty basis, so settle every column directly.
  if (m_ == 0) {
    last_basis_ = Basis{};
    last_basis_.at.assign(n_, NonbasicAt::Lower);
    has_last_basis_ = true;
    std::vector<double> x(n_struct_, 0.0);
    double obj = 0.0;
    for (int j = 0; j < n_struct_; ++j) {
      double v;
      if (cost_[j] > 0.0)
        v = lb_[j];
      else if (cost_[j] < 0.0)
        v = ub_[j];
      else
        v = std::isfinite(lb_[j]) ? lb_[j]
                                  : (std::isfinite(ub_[j]) ? ub_[j] : 0.0);
      if (!std::isfinite(v)) {
        res.status = LpStatus::Unbounded;
        return res;
      }
      x[j] = v;
      obj += cost_[j] * v;
    }
    res.status = LpStatus::Optimal;
    res.objective = obj;
    res.dual_objective = obj;
    res.x = std::move(x);
    return res;
  }

  // --- basis setup / sanitation ---
  auto slack_basis = [this]() {
    Basis b;
    b.basic.resize(m_);
    for (int i = 0; i < m_; ++i) b.basic[i] = n_struct_ + i;
    b.at.assign(n_, NonbasicAt::Lower);
    return b;
  };
  if (have_basis) {
    bool ok = static_cast<int>(basis.basic.size()) == m_ &&
              static_cast<int>(basis.at.size()) == n_;
    if (ok) {
      std::vector<char> seen(n_, 0);
      for (int j : basis.basic)
        if (j < 0 || j >= n_ || seen[j]++) { ok = false; break; }
    }
    if (!ok) basis = slack_basis();
  } else {
    basis = slack_basis();
  }
  std::vector<char> is_basic(n_, 0);
  for (int j : basis.basic) is_basic[j] = 1;
  // A nonbasic variable must rest on a bound that exists.
  for (int j = 0; j < n_; ++j) {
    if (is_basic[j]) continue;
    NonbasicAt& a = basis.at[j];
    const bool lo = std::isfinite(lb_[j]), hi = std::isfinite(ub_[j]);
    if (a == NonbasicAt::Lower && !lo) a = hi ? NonbasicAt::Upper : NonbasicAt::Free;
    else if (a == NonbasicAt::Upper && !hi) a = lo ? NonbasicAt::Lower : NonbasicAt::Free;
    else if (a == NonbasicAt::Free && (lo || hi)) a = lo ? NonbasicAt::Lower : NonbasicAt::Upper;
  }

  auto nb_val = [this, &basis](int j) {
    switch (basis.at[j]) {
      case NonbasicAt::Lower: return lb_[j];
      case NonbasicAt::Upper: return ub_[j];
      default: return 0.0;
    }
  };

  Factor fac;
  auto refactor = [&]() {
    fac.etas.clear();
    Eigen::SparseMatrix<double> B(m_, m_);
    std::vector<Eigen::Triplet<double>> tr;
    for (int i = 0; i < m_; ++i) {
      const int j = basis.basic[i];
      for (int k = col_start_[j]; k < col_start_[j + 1]; ++k)
        tr.emplace_back(row_index_[k], i, value_[k]);
    }
    B.setFromTriplets(tr.begin(), tr.end());
    B.makeCompressed();
    fac.lu.compute(B);
    fac.ok = fac.lu.info() == Eigen::Success;
    return fac.ok;
  };

  VectorXd xB(m_);
  auto recompute_xB = [&]() {
    VectorXd r = Eigen::Map<const VectorXd>(rhs_.data(), m_);
    for (int j = 0; j < n_; ++j) {
      if (is_basic[j]) continue;
      const double v = nb_val(j);
      if (v == 0.0) continue;
      for (int k = col_start_[j]; k < col_start_[j + 1]; ++k)
        r[row_index_[k]] -= value_[k] * v;
    }
    fac.ftran(r);
    xB = r;
  };

  if (!refactor()) {
    // A stale warm basis can be singular; a slack basis cannot.
    basis = slack_basis();
    std::fill(is_basic.begin(), is_basic.end(), 0);
    for (int j : basis.basic) is_basic[j] = 1;
    if (!refactor()) {
      res.status = LpStatus::Singular;
      return res;
    }
  }
  recompute_xB();

  const long iter_limit =
      max_iterations > 0 ? max_iterations : 5000 + 60L * m_ + 4L * n_;

  std::vector<FeasState> state(m_, FeasState::Ok);
  VectorXd y(m_), w(m_);
  bool bland = false;
  int stall = 0, clean_rounds = 0;
  bool just_cleaned = false;
  double last_measure = kInf;
  int last_phase = 0;

  auto ftol = [this](int j) {
    const double b = std::min(std::fabs(lb_[j]) == kInf ? 0.0 : std::fabs(lb_[j]),
                              std::fabs(ub_[j]) == kInf ? 0.0 : std::fabs(ub_[j]));
    return kFeasTol * (1.0 + b);
  };

  auto clean = [&]() {
    if (!refactor()) return false;
    recompute_xB();
    just_cleaned = true;
    ++clean_rounds;
    return true;
  };

  while (true) {
    if (res.iterations >= iter_limit) {
      res.status = LpStatus::IterationLimit;
      break;
    }

    // Classify basic variables and measure infeasibility.
    double inf_sum = 0.0;
    for (int i = 0; i < m_; ++i) {
      const int j = basis.basic[i];
      const double t = ftol(j);
      if (xB[i] < lb_[j] - t) {
        state[i] = FeasState::BelowLb;
        inf_sum += lb_[j] - xB[i];
      } else if (xB[i] > ub_[j] + t) {
        state[i] = FeasState::AboveUb;
        inf_sum += xB[i] - ub_[j];
      } else {
        state[i] = FeasState::Ok;
      }
    }
    const bool phase1 = inf_sum > 0.0;

    // Stall detection drives the anti-cycling fallback.
    double measure;
    if (phase1) {
      measure = inf_sum;
    } else {
      measure = 0.0;
      for (int i = 0; i < m_; ++i) measure += cost_[basis.basic[i]] * xB[i];
      for (int j = 0; j < n_; ++j)
        if (!is_basic[j] && cost_[j] != 0.0) measure += cost_[j] * nb_val(j);
    }
    const int phase_id = phase1 ? 1 : 2;
    if (phase_id != last_phase) {
      last_phase = phase_id;
      last_measure = measure;
      stall = 0;
      bland = false;
    } else if (measure < last_measure - 1e-12 * (1.0 + std::fabs(last_measure))) {
      last_measure = measure;
      stall = 0;
      bland = false;
    } else if (++stall > kStallLimit) {
      bland = true;
    }

    // Simplex multipliers for the active cost vector.
    for (int i = 0; i < m_; ++i) {
      if (phase1)
        y[i] = state[i] == FeasState::BelowLb
                   ? -1.0
                   : (state[i] == FeasState::AboveUb ? 1.0 : 0.0);
      else
        y[i] = cost_[basis.basic[i]];
    }
    fac.btran(y);

    // Pricing.
    int q = -1, dir = 0;
    double best_score = 0.0, dq = 0.0;
    for (int j = 0; j < n_; ++j) {
      if (is_basic[j] || lb_[j] == ub_[j]) continue;
      double d = phase1 ? 0.0 : cost_[j];
      for (int k = col_start_[j]; k < col_start_[j + 1]; ++k)
        d -= value_[k] * y[row_index_[k]];
      const NonbasicAt a = basis.at[j];
      int cand_dir = 0;
      if (d < -kDualTol && (a == NonbasicAt::Lower || a == NonbasicAt::Free))
        cand_dir = 1;
      else if (d > kDualTol && (a == NonbasicAt::Upper || a == NonbasicAt::Free))
        cand_dir = -1;
      if (cand_dir == 0) continue;
      if (bland) { q = j; dir = cand_dir; dq = d; break; }
      const double score = std::fabs(d);
      if (score > best_score) {
        best_score = score;
        q = j;
        dir = cand_dir;
        dq = d;
      }
    }

    if (q < 0) {
      // Claimed optimal (phase 2) or stuck infeasible (phase 1): verify on a
      // freshly factorized basis before trusting roundoff-accumulated state.
      if (!just_cleaned && clean_rounds < 4) {
        if (!clean()) { res.status = LpStatus::Singular; break; }
        continue;
      }
      res.status = phase1 ? LpStatus::Infeasible : LpStatus::Optimal;
      break;
    }
    just_cleaned = false;

    // Entering column through the basis inverse.
    w.setZero();
    for (int k = col_start_[q]; k < col_start_[q + 1]; ++k)
      w[row_index_[k]] = value_[k];
    fac.ftran(w);

    // Ratio test. Basic variable i moves at rate -dir*w[i] per unit step of
    // the entering variable; feasible ones block at their bounds, violated
    // ones block where they regain feasibility.
    double limit = kInf;  // entering variable's own range
    if (std::isfinite(lb_[q]) && std::isfinite(ub_[q])) limit = ub_[q] - lb_[q];
    double best_ratio = kInf;
    int leave = -1;       // row index
    int leave_side = 0;   // -1 leave at lower, +1 leave at upper
    double best_piv = 0.0;
    const double harris = 1e-9;
    for (int i = 0; i < m_; ++i) {
      const double rate = -dir * w[i];
      if (std::fabs(rate) <= kPivotTol) continue;
      const int j = basis.basic[i];
      double ratio = kInf;
      int side = 0;
      switch (state[i]) {
        case FeasState::Ok:
          if (rate < 0.0 && std::isfinite(lb_[j])) {
            ratio = (xB[i] - lb_[j]) / -rate;
            side = -1;
          } else if (rate > 0.0 && std::isfinite(ub_[j])) {
            ratio = (ub_[j] - xB[i]) / rate;
            side = 1;
          }
          break;
        case FeasState::BelowLb:
          if (rate > 0.0) {
            ratio = (lb_[j] - xB[i]) / rate;
            side = -1;
          }
          break;
        case FeasState::AboveUb:
          if (rate < 0.0) {
            ratio = (xB[i] - ub_[j]) / -rate;
            side = 1;
          }
          break;
      }
      if (side == 0) continue;
      if (ratio < 0.0) ratio = 0.0;
      if (ratio < best_ratio - harris * (1.0 + ratio) ||
          (ratio <= best_ratio + harris * (1.0 + best_ratio) &&
           std::fabs(w[i]) > std::fabs(best_piv))) {
        best_ratio = ratio;
        leave = i;
        leave_side = side;
        best_piv = w[i];
      }
    }

    const double step = std::min(limit, best_ratio);
    if (step == kInf) {
      if (phase1) {
        // Composite pricing guarantees a blocker in exact arithmetic.
        res.status = LpStatus::Singular;
        break;
      }
      res.status = LpStatus::Unbounded;
      break;
    }

    ++res.iterations;
    if (limit <= best_ratio) {
      // Bound flip: the entering variable crosses its box; basis unchanged.
      for (int i = 0; i < m_; ++i) xB[i] += (-dir * w[i]) * limit;
      basis.at[q] =
          basis.at[q] == NonbasicAt::Lower ? NonbasicAt::Upper : NonbasicAt::Lower;
      continue;
    }

    // Pivot: q enters with value nb_val(q) + dir*step, basic[leave] exits.
    const int out = basis.basic[leave];
    const double enter_val = nb_val(q) + dir * step;
    for (int i = 0; i < m_; ++i) xB[i] += (-dir * w[i]) * step;
    xB[leave] = enter_val;
    basis.basic[leave] = q;
    is_basic[q] = 1;
    is_basic[out] = 0;
    basis.at[out] = leave_side < 0 ? NonbasicAt::Lower : NonbasicAt::Upper;
    if (!std::isfinite(leave_side < 0 ? lb_[out] : ub_[out]))
      basis.at[out] = NonbasicAt::Free;  // cannot happen for blockers, defensive

    Eta e;
    e.row = leave;
    e.diag = w[leave];
    for (int i = 0; i < m_; ++i)
      if (i != leave && std::fabs(w[i]) > kEtaDrop) e.off.emplace_back(i, w[i]);
    if (std::fabs(e.diag) <= kPivotTol) {
      // Should have been filtered by the ratio test; rebuild defensively.
      if (!refactor()) { res.status = LpStatus::Singular; break; }
      recompute_xB();
      continue;
    }
    fac.etas.push_back(std::move(e));
    if (static_cast<int>(fac.etas.size()) >= kRefactorEvery) {
      if (!refactor()) { res.status = LpStatus::Singular; break; }
      recompute_xB();
    }
  }

  // --- results ---
  last_basis_ = basis;
  has_last_basis_ = true;
  if (res.status != LpStatus::Optimal) return res;

  std::vector<double> x(n_, 0.0);
  for (int j = 0; j < n_; ++j)
    if (!is_basic[j]) x[j] = nb_val(j);
  for (int i = 0; i < m_; ++i) x[basis.basic[i]] = xB[i];

  double obj = 0.0;
  for (int j = 0; j < n_; ++j)
    if (cost_[j] != 0.0) obj += cost_[j] * x[j];

  for (int i = 0; i < m_; ++i) y[i] = cost_[basis.basic[i]];
  fac.btran(y);
  double dual = 0.0;
  for (int i = 0; i < m_; ++i) dual += y[i] * rhs_[i];
  for (int j = 0; j < n_; ++j) {
    if (is_basic[j]) continue;
    double d = cost_[j];
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k)
      d -= value_[k] * y[row_index_[k]];
    if (x[j] != 0.0) dual += d * x[j];
  }

  res.objective = obj;
  res.dual_objective = dual;
  res.duality_residual = std::fabs(obj - dual) / (1.0 + std::fabs(obj));
  res.x.assign(x.begin(), x.begin() + n_struct_);
  return res;
}

}  // namespace psr
