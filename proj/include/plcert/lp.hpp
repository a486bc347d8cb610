#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "plcert/polyhedron.hpp"

namespace plcert {

enum class LPStatus { Optimal, Unbounded, Infeasible };
enum class LPSense { Max, Min };

/// Exact LP outcome. For Optimal, witness is a feasible point attaining the
/// optimum; for Unbounded, witness is a recession direction that improves the
/// objective. Both verify by substitution (see lp_verify).
struct LPResult {
    LPStatus status;
    Rational optimum;  // meaningful only when Optimal
    RVector witness;   // point (Optimal) or ray (Unbounded)
};

namespace detail {

/**
 * Two-phase primal simplex over rationals with Bland's anti-cycling rule.
 *
 * Free variables are split as x = xp - xm with xp, xm >= 0 and every
 * inequality gets a slack, giving the standard form  M z = rhs, z >= 0.
 * Exact pivoting means no tolerances and no scaling; Bland's rule gives
 * termination outright. Everything here maximizes; Min is handled by the
 * caller negating the objective.
 */
class Simplex {
  public:
    Simplex(const RVector& objective, const HPolyhedron& poly) : n_(poly.dim()) {
        const auto& cons = poly.constraints();
        m_ = cons.size();
        nvars_ = 2 * n_ + m_;
        tab_.assign(m_, std::vector<Rational>());
        rhs_.assign(m_, Rational(0));
        basis_.assign(m_, 0);

        // Row i: sum_j A_ij (xp_j - xm_j) + s_i = b_i, flipped when b_i < 0.
        std::vector<std::size_t> needs_artificial;
        for (std::size_t i = 0; i < m_; ++i) {
            const bool flip = cons[i].offset < 0;
            auto& row = tab_[i];
            row.assign(nvars_, Rational(0));
            for (std::size_t j = 0; j < n_; ++j) {
                const Rational& a = cons[i].normal[j];
                row[j] = flip ? -a : a;
                row[n_ + j] = flip ? a : -a;
            }
            row[2 * n_ + i] = flip ? Rational(-1) : Rational(1);
            rhs_[i] = flip ? -cons[i].offset : cons[i].offset;
            if (flip)
                needs_artificial.push_back(i);
            else
                basis_[i] = 2 * n_ + i;
        }

        // Phase 1 only when some row lacks a unit slack column.
        if (!needs_artificial.empty()) {
            const std::size_t art_base = nvars_;
            nvars_ += needs_artificial.size();
            for (auto& row : tab_) row.resize(nvars_, Rational(0));
            for (std::size_t k = 0; k < needs_artificial.size(); ++k) {
                tab_[needs_artificial[k]][art_base + k] = 1;
                basis_[needs_artificial[k]] = art_base + k;
            }
            std::vector<Rational> phase1(nvars_, Rational(0));
            for (std::size_t k = 0; k < needs_artificial.size(); ++k)
                phase1[art_base + k] = -1;
            price_out(phase1);
            run();  // bounded above by 0, never Unbounded
            if (obj_val_ < 0) {
                status_ = LPStatus::Infeasible;
                return;
            }
            purge_artificials(art_base);
        }

        std::vector<Rational> costs(nvars_, Rational(0));
        for (std::size_t j = 0; j < n_; ++j) {
            costs[j] = objective[j];
            costs[n_ + j] = -objective[j];
        }
        price_out(costs);
        status_ = run();
    }

    LPStatus status() const { return status_; }
    const Rational& objective_value() const { return obj_val_; }

    /// Basic solution mapped back to the free variables x = xp - xm.
    RVector point() const {
        std::vector<Rational> z(nvars_, Rational(0));
        for (std::size_t i = 0; i < tab_.size(); ++i) z[basis_[i]] = rhs_[i];
        RVector x(n_);
        for (std::size_t j = 0; j < n_; ++j) x[j] = z[j] - z[n_ + j];
        return x;
    }

    /// Improving ray in x-space (valid after run() returned Unbounded).
    RVector ray() const {
        std::vector<Rational> d(nvars_, Rational(0));
        d[unbounded_col_] = 1;
        for (std::size_t i = 0; i < tab_.size(); ++i)
            d[basis_[i]] = -tab_[i][unbounded_col_];
        RVector r(n_);
        for (std::size_t j = 0; j < n_; ++j) r[j] = d[j] - d[n_ + j];
        return r;
    }

  private:
    void price_out(const std::vector<Rational>& costs) {
        obj_ = costs;
        obj_val_ = 0;
        for (std::size_t i = 0; i < tab_.size(); ++i) {
            const Rational& cb = costs[basis_[i]];
            if (cb == 0) continue;
            for (std::size_t j = 0; j < nvars_; ++j) obj_[j] -= cb * tab_[i][j];
            obj_val_ += cb * rhs_[i];
        }
    }

    void pivot(std::size_t r, std::size_t col) {
        const Rational p = tab_[r][col];
        for (auto& v : tab_[r]) v /= p;
        rhs_[r] /= p;
        for (std::size_t i = 0; i < tab_.size(); ++i) {
            if (i == r || tab_[i][col] == 0) continue;
            const Rational f = tab_[i][col];
            for (std::size_t j = 0; j < nvars_; ++j) tab_[i][j] -= f * tab_[r][j];
            rhs_[i] -= f * rhs_[r];
        }
        if (obj_[col] != 0) {
            const Rational f = obj_[col];
            for (std::size_t j = 0; j < nvars_; ++j) obj_[j] -= f * tab_[r][j];
            obj_val_ += f * rhs_[r];
        }
        basis_[r] = col;
    }

    LPStatus run() {
        while (true) {
            // Bland: lowest-index column with positive reduced cost.
            std::size_t enter = nvars_;
            for (std::size_t j = 0; j < nvars_; ++j)
                if (obj_[j] > 0) {
                    enter = j;
                    break;
                }
            if (enter == nvars_) return LPStatus::Optimal;

            std::size_t leave = tab_.size();
            Rational best;
            for (std::size_t i = 0; i < tab_.size(); ++i) {
                if (tab_[i][enter] <= 0) continue;
                const Rational ratio = rhs_[i] / tab_[i][enter];
                if (leave == tab_.size() || ratio < best ||
                    (ratio == best && basis_[i] < basis_[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == tab_.size()) {
                unbounded_col_ = enter;
                return LPStatus::Unbounded;
            }
            pivot(leave, enter);
        }
    }

    /// After a feasible phase 1: pivot degenerate artificials out of the
    /// basis (or drop redundant rows), then cut the artificial columns off.
    void purge_artificials(std::size_t art_base) {
        for (std::size_t i = 0; i < tab_.size();) {
            if (basis_[i] < art_base) {
                ++i;
                continue;
            }
            std::size_t col = art_base;
            for (std::size_t j = 0; j < art_base; ++j)
                if (tab_[i][j] != 0) {
                    col = j;
                    break;
                }
            if (col == art_base) {
                tab_.erase(tab_.begin() + static_cast<std::ptrdiff_t>(i));
                rhs_.erase(rhs_.begin() + static_cast<std::ptrdiff_t>(i));
                basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
            } else {
                pivot(i, col);
                ++i;
            }
        }
        nvars_ = art_base;
        for (auto& row : tab_) row.resize(nvars_);
    }

    std::size_t n_, m_, nvars_;
    std::vector<std::vector<Rational>> tab_;
    std::vector<Rational> rhs_;
    std::vector<std::size_t> basis_;
    std::vector<Rational> obj_;
    Rational obj_val_;
    std::size_t unbounded_col_ = 0;
    LPStatus status_ = LPStatus::Infeasible;
};

}  // namespace detail

/// Exact simplex solve of max/min objective . x over P.
inline LPResult lp_solve(const RVector& objective, const HPolyhedron& poly, LPSense sense) {
    if (objective.dim() != poly.dim())
        throw DimensionError("lp_solve: objective dim " + std::to_string(objective.dim()) +
                             " vs polyhedron dim " + std::to_string(poly.dim()));
    const RVector obj = sense == LPSense::Max ? objective : -objective;
    detail::Simplex simplex(obj, poly);
    switch (simplex.status()) {
        case LPStatus::Infeasible:
            return {LPStatus::Infeasible, Rational(0), RVector()};
        case LPStatus::Unbounded:
            return {LPStatus::Unbounded, Rational(0), simplex.ray()};
        case LPStatus::Optimal:
        default: {
            const Rational value = sense == LPSense::Max ? simplex.objective_value()
                                                         : Rational(-simplex.objective_value());
            return {LPStatus::Optimal, value, simplex.point()};
        }
    }
}

/// Substitution check of an LP result, with zero tolerance. Optimal: the
/// witness is feasible and attains the optimum. Unbounded: the witness is a
/// recession direction of P that strictly improves the objective.
inline bool lp_verify(const LPResult& result, const RVector& objective, const HPolyhedron& poly,
                      LPSense sense) {
    switch (result.status) {
        case LPStatus::Optimal:
            return poly.contains(result.witness) &&
                   dot(objective, result.witness) == result.optimum;
        case LPStatus::Unbounded: {
            for (const auto& h : poly.constraints())
                if (dot(h.normal, result.witness) > 0) return false;
            const Rational gain = dot(objective, result.witness);
            return sense == LPSense::Max ? gain > 0 : gain < 0;
        }
        case LPStatus::Infeasible:
        default:
            return true;  // no positive certificate carried
    }
}

}  // namespace plcert
