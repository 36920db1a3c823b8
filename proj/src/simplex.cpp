#include "simplex.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

namespace rtnep::detail {

namespace {
constexpr double kZeroTol = 1e-12;     // entries below this are treated as structural zeros
constexpr double kPivotTol = 1e-8;     // smallest acceptable pivot magnitude
constexpr double kRatioTieTol = 1e-11;
constexpr int kRefactorEvery = 120;
}  // namespace

SimplexSolver::SimplexSolver(const LinearProgram& lp) {
    n_ = lp.num_vars();
    m_ = lp.num_rows();
    ncol_ = n_ + m_;

    // structural columns (gathered from the row-major input), then unit slacks
    std::vector<int> counts(n_, 0);
    for (const auto& row : lp.rows)
        for (const auto& [j, v] : row.coefs)
            if (v != 0.0) ++counts[j];
    col_start_.assign(ncol_ + 1, 0);
    for (int j = 0; j < n_; ++j) col_start_[j + 1] = col_start_[j] + counts[j];
    for (int i = 0; i < m_; ++i) col_start_[n_ + i + 1] = col_start_[n_ + i] + 1;
    col_row_.resize(col_start_[ncol_]);
    col_val_.resize(col_start_[ncol_]);
    std::vector<int> fill(n_, 0);
    for (int i = 0; i < m_; ++i) {
        for (const auto& [j, v] : lp.rows[i].coefs) {
            if (v == 0.0) continue;
            int p = col_start_[j] + fill[j]++;
            col_row_[p] = i;
            col_val_[p] = v;
        }
    }
    for (int i = 0; i < m_; ++i) {
        col_row_[col_start_[n_ + i]] = i;
        col_val_[col_start_[n_ + i]] = 1.0;
    }

    cost_.assign(ncol_, 0.0);
    lo_.resize(ncol_);
    up_.resize(ncol_);
    rhs_.resize(m_);
    for (int j = 0; j < n_; ++j) {
        cost_[j] = lp.objective[j];
        lo_[j] = lp.lower[j];
        up_[j] = lp.upper[j];
    }
    for (int i = 0; i < m_; ++i) {
        rhs_[i] = lp.rows[i].rhs;
        switch (lp.rows[i].kind) {
            case RowKind::Equal: lo_[n_ + i] = 0.0; up_[n_ + i] = 0.0; break;
            case RowKind::LessEqual: lo_[n_ + i] = 0.0; up_[n_ + i] = kInf; break;
            case RowKind::GreaterEqual: lo_[n_ + i] = -kInf; up_[n_ + i] = 0.0; break;
        }
    }
    orig_lo_ = lo_;
    orig_up_ = up_;

    xval_.assign(ncol_, 0.0);
    work_.assign(m_, 0.0);
    zstep_.assign(m_, 0.0);
    imark_.assign(m_, 0);
}

void SimplexSolver::set_bounds(int var, double lo, double up) {
    assert(var >= 0 && var < n_);
    lo_[var] = lo;
    up_[var] = up;
}

void SimplexSolver::reset_bounds() {
    std::copy(orig_lo_.begin(), orig_lo_.begin() + n_, lo_.begin());
    std::copy(orig_up_.begin(), orig_up_.begin() + n_, up_.begin());
}

double SimplexSolver::nonbasic_value(int col, uint8_t st) const {
    if (st == kAtLower) return lo_[col];
    if (st == kAtUpper) return up_[col];
    return 0.0;
}

double SimplexSolver::infeas_tol(int col, double feas_tol) const {
    double scale = std::max(std::abs(lo_[col]) == kInf ? 0.0 : std::abs(lo_[col]),
                            std::abs(up_[col]) == kInf ? 0.0 : std::abs(up_[col]));
    return feas_tol * (1.0 + scale);
}

void SimplexSolver::cold_basis() {
    basic_.resize(m_);
    vstat_.assign(ncol_, kAtLower);
    for (int j = 0; j < ncol_; ++j) {
        bool lf = std::isfinite(lo_[j]), uf = std::isfinite(up_[j]);
        if (lf && uf) vstat_[j] = std::abs(lo_[j]) <= std::abs(up_[j]) ? kAtLower : kAtUpper;
        else if (lf) vstat_[j] = kAtLower;
        else if (uf) vstat_[j] = kAtUpper;
        else vstat_[j] = kFreeNonbasic;
    }
    for (int i = 0; i < m_; ++i) {
        basic_[i] = n_ + i;
        vstat_[n_ + i] = kBasic;
    }
    has_basis_ = true;
}

void SimplexSolver::load_basis(const BasisSnapshot& b) {
    if (static_cast<int>(b.basic.size()) != m_ || static_cast<int>(b.vstat.size()) != ncol_) {
        has_basis_ = false;
        return;
    }
    std::vector<uint8_t> seen(ncol_, 0);
    bool ok = true;
    for (int32_t c : b.basic) {
        if (c < 0 || c >= ncol_ || seen[c]) { ok = false; break; }
        seen[c] = 1;
        if (b.vstat[c] != kBasic) ok = false;
    }
    if (!ok) {
        has_basis_ = false;
        return;
    }
    basic_ = b.basic;
    vstat_ = b.vstat;
    // bounds may have changed since the snapshot; snap nonbasic states to
    // whatever bound still exists
    for (int j = 0; j < ncol_; ++j) {
        if (vstat_[j] == kBasic) continue;
        bool lf = std::isfinite(lo_[j]), uf = std::isfinite(up_[j]);
        if (vstat_[j] == kAtLower && !lf) vstat_[j] = uf ? kAtUpper : kFreeNonbasic;
        if (vstat_[j] == kAtUpper && !uf) vstat_[j] = lf ? kAtLower : kFreeNonbasic;
        if (vstat_[j] == kFreeNonbasic && (lf || uf)) vstat_[j] = lf ? kAtLower : kAtUpper;
    }
    has_basis_ = true;
}

void SimplexSolver::clear_basis() { has_basis_ = false; }

bool SimplexSolver::factorize() {
    for (int attempt = 0; attempt < 2; ++attempt) {
        lu_pivrow_.assign(m_, -1);
        lu_rowpos_.assign(m_, -1);
        lu_order_.resize(m_);
        lu_lcols_.assign(m_, {});
        lu_ucols_.assign(m_, {});
        lu_udiag_.assign(m_, 0.0);
        etas_.clear();

        std::vector<int> order(m_);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            int ca = basic_[a], cb = basic_[b];
            int na = col_start_[ca + 1] - col_start_[ca];
            int nb = col_start_[cb + 1] - col_start_[cb];
            if (na != nb) return na < nb;
            return a < b;
        });

        std::vector<double>& w = work_;
        std::fill(w.begin(), w.end(), 0.0);
        std::vector<int> pattern;
        pattern.reserve(64);
        std::vector<int> failed;

        for (int t = 0; t < m_; ++t) {
            int pos = order[t];
            int col = basic_[pos];
            pattern.clear();
            ++mark_version_;
            for (int p = col_start_[col]; p < col_start_[col + 1]; ++p) {
                w[col_row_[p]] = col_val_[p];
                imark_[col_row_[p]] = mark_version_;
                pattern.push_back(col_row_[p]);
            }
            // eliminate with all earlier steps in order
            for (int s = 0; s < t; ++s) {
                double mult = w[lu_pivrow_[s]];
                if (mult == 0.0) continue;
                if (std::abs(mult) <= kZeroTol) {
                    w[lu_pivrow_[s]] = 0.0;
                    continue;
                }
                lu_ucols_[t].push_back({s, mult});
                w[lu_pivrow_[s]] = 0.0;
                for (const auto& [r, lval] : lu_lcols_[s]) {
                    if (imark_[r] != mark_version_) {
                        imark_[r] = mark_version_;
                        pattern.push_back(r);
                        w[r] = 0.0;
                    }
                    w[r] -= mult * lval;
                }
            }
            // pivot: largest remaining entry on an unpivoted row (pattern
            // order is deterministic, first max wins)
            int prow = -1;
            double pmax = kZeroTol;
            for (int r : pattern) {
                if (lu_rowpos_[r] >= 0) continue;
                double a = std::abs(w[r]);
                if (a > pmax) { pmax = a; prow = r; }
            }
            if (prow < 0) {
                failed.push_back(pos);
                lu_ucols_[t].clear();
                for (int r : pattern) w[r] = 0.0;
                lu_udiag_[t] = 1.0;  // placeholder; factor will be rebuilt
                continue;
            }
            lu_pivrow_[t] = prow;
            lu_rowpos_[prow] = t;
            lu_order_[t] = pos;
            lu_udiag_[t] = w[prow];
            for (int r : pattern) {
                if (r == prow || lu_rowpos_[r] >= 0) { w[r] = 0.0; continue; }
                if (std::abs(w[r]) > kZeroTol) lu_lcols_[t].push_back({r, w[r] / lu_udiag_[t]});
                w[r] = 0.0;
            }
            w[prow] = 0.0;
        }

        if (failed.empty()) return true;

        // repair: dependent columns leave the basis for the slacks of the
        // rows that never received a pivot
        std::vector<int> open_rows;
        for (int r = 0; r < m_; ++r)
            if (lu_rowpos_[r] < 0) open_rows.push_back(r);
        if (open_rows.size() != failed.size()) return false;
        std::sort(failed.begin(), failed.end());
        for (size_t k = 0; k < failed.size(); ++k) {
            int pos = failed[k];
            int old = basic_[pos];
            int slack = n_ + open_rows[k];
            if (vstat_[slack] == kBasic) return false;
            bool lf = std::isfinite(lo_[old]), uf = std::isfinite(up_[old]);
            vstat_[old] = lf ? kAtLower : (uf ? kAtUpper : kFreeNonbasic);
            xval_[old] = nonbasic_value(old, vstat_[old]);
            basic_[pos] = slack;
            vstat_[slack] = kBasic;
        }
    }
    return false;
}

void SimplexSolver::compute_basic_values() {
    std::vector<double> v(m_);
    for (int i = 0; i < m_; ++i) v[i] = rhs_[i];
    for (int j = 0; j < ncol_; ++j) {
        if (vstat_[j] == kBasic) continue;
        double x = nonbasic_value(j, vstat_[j]);
        xval_[j] = x;
        if (x == 0.0) continue;
        for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) v[col_row_[p]] -= col_val_[p] * x;
    }
    ftran(v);
    for (int pos = 0; pos < m_; ++pos) xval_[basic_[pos]] = v[pos];
}

void SimplexSolver::ftran(std::vector<double>& v) const {
    // L forward (matrix-row space)
    for (int t = 0; t < m_; ++t) {
        double piv = v[lu_pivrow_[t]];
        if (piv == 0.0) continue;
        for (const auto& [r, lval] : lu_lcols_[t]) v[r] -= piv * lval;
    }
    // U backward (column oriented), result per elimination step
    std::vector<double>& z = zstep_;
    for (int t = m_ - 1; t >= 0; --t) {
        double zt = v[lu_pivrow_[t]] / lu_udiag_[t];
        z[t] = zt;
        if (zt == 0.0) continue;
        for (const auto& [s, uval] : lu_ucols_[t]) v[lu_pivrow_[s]] -= uval * zt;
    }
    for (int t = 0; t < m_; ++t) v[lu_order_[t]] = z[t];
    // product-form updates
    for (const auto& e : etas_) {
        double t = v[e.pos] / e.wp;
        v[e.pos] = t;
        if (t == 0.0) continue;
        for (const auto& [pos, val] : e.ent) v[pos] -= val * t;
    }
}

void SimplexSolver::btran(std::vector<double>& v) const {
    // v enters in basis-position space (costs), leaves in matrix-row space
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
        double acc = v[it->pos];
        for (const auto& [pos, val] : it->ent) acc -= v[pos] * val;
        v[it->pos] = acc / it->wp;
    }
    std::vector<double>& w = zstep_;
    // U^T forward over steps
    for (int t = 0; t < m_; ++t) {
        double acc = v[lu_order_[t]];
        for (const auto& [s, uval] : lu_ucols_[t]) acc -= uval * w[s];
        w[t] = acc / lu_udiag_[t];
    }
    // L^T backward
    for (int t = m_ - 1; t >= 0; --t) {
        double acc = w[t];
        for (const auto& [r, lval] : lu_lcols_[t]) acc -= lval * w[lu_rowpos_[r]];
        w[t] = acc;
    }
    for (int t = 0; t < m_; ++t) v[lu_pivrow_[t]] = w[t];
}

SimplexSolver::SolveInfo SimplexSolver::solve(const LpTolerances& tol, bool force_bland) {
    SolveInfo info;
    if (!has_basis_) cold_basis();
    if (!factorize()) {
        cold_basis();
        if (!factorize()) {
            info.status = SolveStatus::NumericalFailure;
            return info;
        }
    }
    compute_basic_values();

    const double dual_tol = std::max(tol.feas_tol, 1e-11);
    bool bland = force_bland;
    long degen_run = 0;
    int pivots_since_refactor = 0;
    std::vector<uint8_t> banned(ncol_, 0);
    bool any_banned = false;
    std::vector<double> y(m_), cb(m_), w(m_);
    farkas_rows_.clear();

    auto total_infeasibility = [&]() {
        double f = 0.0;
        for (int pos = 0; pos < m_; ++pos) {
            int c = basic_[pos];
            double itl = infeas_tol(c, tol.feas_tol);
            if (xval_[c] < lo_[c] - itl) f += lo_[c] - xval_[c];
            else if (xval_[c] > up_[c] + itl) f += xval_[c] - up_[c];
        }
        return f;
    };

    auto finalize_duals = [&](const std::vector<double>& yvec) {
        y_out_ = yvec;
        d_out_.assign(n_, 0.0);
        for (int j = 0; j < n_; ++j) {
            double d = cost_[j];
            for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) d -= yvec[col_row_[p]] * col_val_[p];
            d_out_[j] = d;
        }
    };

    while (true) {
        if (info.iterations >= tol.max_iterations) {
            info.status = SolveStatus::LimitExceeded;
            finalize_duals(std::vector<double>(m_, 0.0));
            return info;
        }

        bool phase1 = total_infeasibility() > 0.0;

        // dual prices for the active objective
        for (int pos = 0; pos < m_; ++pos) {
            int c = basic_[pos];
            if (phase1) {
                double itl = infeas_tol(c, tol.feas_tol);
                cb[pos] = xval_[c] < lo_[c] - itl ? -1.0 : (xval_[c] > up_[c] + itl ? 1.0 : 0.0);
            } else {
                cb[pos] = cost_[c];
            }
        }
        y = cb;
        btran(y);

        // entering selection
        int enter = -1, dir = 0;
        double best_viol = phase1 ? 1e-9 : dual_tol;
        for (int j = 0; j < ncol_; ++j) {
            uint8_t st = vstat_[j];
            if (st == kBasic) continue;
            if (lo_[j] == up_[j]) continue;  // fixed
            if (any_banned && banned[j]) continue;
            double d = phase1 ? 0.0 : cost_[j];
            for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) d -= y[col_row_[p]] * col_val_[p];
            double viol = 0.0;
            int cand_dir = 0;
            if (st == kAtLower && d < -best_viol) { viol = -d; cand_dir = 1; }
            else if (st == kAtUpper && d > best_viol) { viol = d; cand_dir = -1; }
            else if (st == kFreeNonbasic && std::abs(d) > best_viol) { viol = std::abs(d); cand_dir = d < 0 ? 1 : -1; }
            if (cand_dir == 0) continue;
            if (bland) { enter = j; dir = cand_dir; break; }
            if (viol > best_viol) { best_viol = viol; enter = j; dir = cand_dir; }
        }

        if (enter < 0) {
            if (any_banned) {
                info.status = SolveStatus::NumericalFailure;
                finalize_duals(y);
                return info;
            }
            if (phase1) {
                info.status = SolveStatus::Infeasible;
                finalize_duals(y);
                for (int i = 0; i < m_; ++i)
                    if (std::abs(y[i]) > 1e-7) farkas_rows_.push_back(i);
                return info;
            }
            info.status = SolveStatus::Optimal;
            finalize_duals(y);
            break;
        }

        // update direction w = B^-1 A_enter (basis-position space)
        std::fill(w.begin(), w.end(), 0.0);
        for (int p = col_start_[enter]; p < col_start_[enter + 1]; ++p) w[col_row_[p]] = col_val_[p];
        ftran(w);

        double range = up_[enter] - lo_[enter];  // +inf when one side is open
        bool flip_possible = std::isfinite(range) && vstat_[enter] != kFreeNonbasic;

        int leave_pos = -1;
        uint8_t leave_stat = kAtLower;
        double step = kInf;

        if (!phase1) {
            // standard two-sided ratio test
            double tmin = flip_possible ? range : kInf;
            for (int pos = 0; pos < m_; ++pos) {
                if (std::abs(w[pos]) <= kZeroTol) continue;
                int c = basic_[pos];
                double rate = -dir * w[pos];
                double limit;
                if (rate > 0.0) {
                    if (up_[c] == kInf) continue;
                    limit = (up_[c] - xval_[c]) / rate;
                } else {
                    if (lo_[c] == -kInf) continue;
                    limit = (lo_[c] - xval_[c]) / rate;
                }
                if (limit < 0.0) limit = 0.0;
                if (limit < tmin - kRatioTieTol) tmin = limit;
            }
            if (tmin == kInf) {
                info.status = SolveStatus::Unbounded;
                finalize_duals(y);
                return info;
            }
            // leaving: largest |w| among limits within a tie band of tmin;
            // under Bland's rule, lowest leaving column index instead
            double best_piv = 0.0;
            int best_col = ncol_;
            for (int pos = 0; pos < m_; ++pos) {
                if (std::abs(w[pos]) <= kZeroTol) continue;
                int c = basic_[pos];
                double rate = -dir * w[pos];
                double limit;
                uint8_t stat;
                if (rate > 0.0) {
                    if (up_[c] == kInf) continue;
                    limit = (up_[c] - xval_[c]) / rate;
                    stat = kAtUpper;
                } else {
                    if (lo_[c] == -kInf) continue;
                    limit = (lo_[c] - xval_[c]) / rate;
                    stat = kAtLower;
                }
                if (limit < 0.0) limit = 0.0;
                if (limit > tmin + kRatioTieTol) continue;
                bool better = bland ? c < best_col : std::abs(w[pos]) > best_piv;
                if (better) {
                    best_piv = std::abs(w[pos]);
                    best_col = c;
                    leave_pos = pos;
                    leave_stat = stat;
                    step = limit;
                }
            }
            if (leave_pos < 0) step = tmin;  // entering bound flip
        } else {
            // long-step phase-1 ratio test: walk breakpoints while the
            // infeasibility keeps decreasing
            // breakpoints where the piecewise slope increases. Classification
            // must match the pricing: a basic counts as infeasible only beyond
            // its tolerance band, and a basic anywhere inside the band that is
            // pushed outward contributes a kink at t = 0.
            struct Event { double t; double inc; int pos; uint8_t stat; double absw; };
            std::vector<Event> events;
            for (int pos = 0; pos < m_; ++pos) {
                if (std::abs(w[pos]) <= kZeroTol) continue;
                int c = basic_[pos];
                double rate = -dir * w[pos];
                double x = xval_[c];
                double itl = infeas_tol(c, tol.feas_tol);
                double absw = std::abs(w[pos]);
                if (rate > 0.0) {
                    if (x < lo_[c] - itl)
                        events.push_back({std::max(0.0, (lo_[c] - x) / rate), rate, pos, kAtLower, absw});
                    if (std::isfinite(up_[c]) && x <= up_[c] + itl)
                        events.push_back({std::max(0.0, (up_[c] - x) / rate), rate, pos, kAtUpper, absw});
                } else {
                    if (x > up_[c] + itl)
                        events.push_back({std::max(0.0, (up_[c] - x) / rate), -rate, pos, kAtUpper, absw});
                    if (std::isfinite(lo_[c]) && x >= lo_[c] - itl)
                        events.push_back({std::max(0.0, (lo_[c] - x) / rate), -rate, pos, kAtLower, absw});
                }
            }
            std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
                if (a.t != b.t) return a.t < b.t;
                return a.pos < b.pos;
            });
            double slope = -best_viol;  // dF/dt at t = 0
            double flip_t = flip_possible ? range : kInf;
            size_t k = 0;
            bool flipped = false;
            while (true) {
                if (k >= events.size()) {
                    if (flip_t < kInf) { step = flip_t; flipped = true; break; }
                    info.status = SolveStatus::NumericalFailure;  // decreasing with no breakpoint
                    finalize_duals(y);
                    return info;
                }
                if (events[k].t >= flip_t) { step = flip_t; flipped = true; break; }
                // absorb all events at this breakpoint
                size_t k2 = k;
                double t_here = events[k].t;
                while (k2 < events.size() && events[k2].t <= t_here + kRatioTieTol) {
                    slope += events[k2].inc;
                    ++k2;
                }
                if (slope >= -1e-12) {
                    // stop here; leave with the stablest pivot among this group
                    // (lowest leaving column under Bland's rule)
                    double best_piv = 0.0;
                    int best_col = ncol_;
                    for (size_t q = k; q < k2; ++q) {
                        int c = basic_[events[q].pos];
                        bool better = bland ? c < best_col : events[q].absw > best_piv;
                        if (better) {
                            best_piv = events[q].absw;
                            best_col = c;
                            leave_pos = events[q].pos;
                            leave_stat = events[q].stat;
                            step = events[q].t;
                        }
                    }
                    break;
                }
                k = k2;
            }
            if (flipped) leave_pos = -1;
        }

        if (leave_pos >= 0 && std::abs(w[leave_pos]) < kPivotTol) {
            if (pivots_since_refactor > 0) {
                factorize();
                compute_basic_values();
                pivots_since_refactor = 0;
                continue;  // re-price from the refreshed factorization
            }
            banned[enter] = 1;
            any_banned = true;
            ++info.iterations;
            continue;
        }

        // apply the move
        if (step != 0.0) {
            for (int pos = 0; pos < m_; ++pos) {
                if (w[pos] == 0.0) continue;
                xval_[basic_[pos]] -= step * dir * w[pos];
            }
        }
        if (leave_pos < 0) {
            // bound flip
            vstat_[enter] = vstat_[enter] == kAtLower ? kAtUpper : kAtLower;
            xval_[enter] = nonbasic_value(enter, vstat_[enter]);
        } else {
            int leave_col = basic_[leave_pos];
            double enter_val = xval_[enter] + dir * step;
            vstat_[leave_col] =
                lo_[leave_col] == up_[leave_col] ? static_cast<uint8_t>(kAtLower) : leave_stat;
            xval_[leave_col] = nonbasic_value(leave_col, vstat_[leave_col]);
            basic_[leave_pos] = enter;
            vstat_[enter] = kBasic;
            xval_[enter] = enter_val;

            Eta e;
            e.pos = leave_pos;
            e.wp = w[leave_pos];
            for (int pos = 0; pos < m_; ++pos) {
                if (pos == leave_pos || std::abs(w[pos]) <= kZeroTol) continue;
                e.ent.push_back({pos, w[pos]});
            }
            etas_.push_back(std::move(e));
            ++pivots_since_refactor;
        }

        if (any_banned) {
            std::fill(banned.begin(), banned.end(), 0);
            any_banned = false;
        }
        ++info.iterations;
        if (step <= kRatioTieTol) {
            if (++degen_run > std::max<long>(1000, 2L * m_) && !bland) bland = true;
        } else {
            degen_run = 0;
        }
        if (pivots_since_refactor >= kRefactorEvery) {
            if (!factorize()) {
                info.status = SolveStatus::NumericalFailure;
                finalize_duals(std::vector<double>(m_, 0.0));
                return info;
            }
            compute_basic_values();
            pivots_since_refactor = 0;
        }
    }

    // optimal: objective, residuals and the bounded-variable dual objective
    double obj = 0.0;
    for (int j = 0; j < n_; ++j) obj += cost_[j] * xval_[j];
    info.objective = obj;

    std::vector<double> act(m_, 0.0);
    for (int j = 0; j < n_; ++j) {
        if (xval_[j] == 0.0) continue;
        for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) act[col_row_[p]] += col_val_[p] * xval_[j];
    }
    double pres = 0.0, cres = 0.0;
    for (int i = 0; i < m_; ++i) {
        double s = rhs_[i] - act[i];  // slack value implied by structurals
        double vlo = lo_[n_ + i], vup = up_[n_ + i];
        pres = std::max(pres, std::max(vlo - s, s - vup));
        double slack_gap = std::min(std::isfinite(vlo) ? s - vlo : kInf, std::isfinite(vup) ? vup - s : kInf);
        if (std::isfinite(slack_gap)) cres = std::max(cres, std::abs(y_out_[i]) * std::max(0.0, slack_gap) /
                                                                 (1.0 + std::abs(rhs_[i])) / (1.0 + std::abs(y_out_[i])));
    }
    for (int j = 0; j < n_; ++j)
        pres = std::max(pres, std::max(lo_[j] - xval_[j], xval_[j] - up_[j]));
    info.primal_residual = std::max(pres, 0.0);
    info.cs_residual = cres;

    double dual_obj = 0.0;
    for (int i = 0; i < m_; ++i) dual_obj += y_out_[i] * rhs_[i];
    for (int j = 0; j < ncol_; ++j) {
        if (vstat_[j] == kBasic || vstat_[j] == kFreeNonbasic) continue;
        double d = cost_[j];
        for (int p = col_start_[j]; p < col_start_[j + 1]; ++p) d -= y_out_[col_row_[p]] * col_val_[p];
        dual_obj += d * (vstat_[j] == kAtLower ? lo_[j] : up_[j]);
    }
    info.dual_gap = std::abs(obj - dual_obj);
    return info;
}

}  // namespace rtnep::detail
