#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "ncforms.hpp"

namespace yl {

// [rep; stage] with rep in Y(X, Omega^stage Y)
template <class F>
struct SYElem {
    int stage = 0;
    YElem<F> rep;
};

struct StageInfo {
    int stage = 0;
    std::size_t space_dim = 0;     // dim Y(X, Omega^p Y)^n
    long long h = 0;               // dim H^n at this stage
    long long rank_from_prev = -1; // rank of the induced map from the previous stage
};

struct StabilizationReport {
    int degree = 0;
    int first_stage = 0;
    std::vector<StageInfo> stages;
    bool stable = false;
    long long value = 0;
    int stage = -1; // stage at which the run of bijections completed
};

// Stage-wise model of SY(X, Y): the sequence Y(X, Omega^p Y) along theta ⊙ -.
// Stage p uses the filtration cap nmax + 1 + b_X - a_Y + p, exact in all
// degrees <= nmax. X and Y must outlive the object.
template <class F>
class SYHom {
public:
    SYHom(const Complex<F>& X, const Complex<F>& Y, int nmax) : X_(&X), Y_(&Y), nmax_(nmax) {}
    SYHom(const SYHom&) = delete;
    SYHom& operator=(const SYHom&) = delete;

    const Complex<F>& source() const { return *X_; }
    const Complex<F>& target() const { return *Y_; }
    const Algebra<F>& algebra() const { return *X_->A; }
    const F& field() const { return X_->A->field(); }
    int nmax() const { return nmax_; }

    int cap(int p) const {
        if (X_->empty() || Y_->empty()) return 0;
        return std::max(0, nmax_ + 1 + X_->bmax() - Y_->amin() + p);
    }
    // first stage at which degree n can carry anything
    int first_stage(int n) const {
        if (X_->empty() || Y_->empty()) return 0;
        return std::max(0, -n + X_->bmax() - Y_->amin());
    }

    const OmegaPower<F>& omega(int p) const {
        while (static_cast<int>(omegas_.size()) <= p)
            omegas_.push_back(std::make_unique<OmegaPower<F>>(*Y_, static_cast<int>(omegas_.size())));
        return *omegas_[p];
    }
    const YonedaHom<F>& stage(int p) const {
        while (static_cast<int>(stages_.size()) <= p) {
            int q = static_cast<int>(stages_.size());
            stages_.push_back(std::make_unique<YonedaHom<F>>(*X_, omega(q).complex(), cap(q)));
        }
        return *stages_[p];
    }

    YElem<F> step(const YElem<F>& f, int p) const {
        return structure_map(stage(p), f, omega(p), omega(p + 1), stage(p + 1));
    }
    SYElem<F> lift(const SYElem<F>& f, int to) const {
        if (to < f.stage) throw std::invalid_argument("cannot lift to an earlier stage");
        SYElem<F> g = f;
        while (g.stage < to) {
            g.rep = step(g.rep, g.stage);
            ++g.stage;
        }
        return g;
    }
    SYElem<F> canonical(const YElem<F>& f) const { return {0, f}; }
    SYElem<F> delta(const SYElem<F>& f) const { return {f.stage, stage(f.stage).delta_elem(f.rep)}; }
    SYElem<F> identity() const { return {0, stage(0).identity()}; }

    // equality decided at max(stage) + slack
    bool equal(const SYElem<F>& a, const SYElem<F>& b, int slack = 3) const {
        if (a.rep.deg != b.rep.deg) return false;
        int s = std::max(a.stage, b.stage) + slack;
        auto x = lift(a, s), y = lift(b, s);
        return x.rep.v == y.rep.v;
    }

    // H^n along the stages, stopping after s consecutive bijections
    StabilizationReport cohomology(int n, int s = 3, int max_stage = 10) const {
        if (n > nmax_) throw std::invalid_argument("degree above the configured nmax");
        StabilizationReport R;
        R.degree = n;
        R.first_stage = first_stage(n);
        const F& f = field();
        int run = 0;
        std::vector<SVec<F>> prev_reps;
        long long prev_h = 0;
        for (int p = R.first_stage; p <= max_stage; ++p) {
            auto C = stage(p).complex(n - 1, n + 1);
            StageInfo info;
            info.stage = p;
            info.space_dim = C.dim(n);
            info.h = cohomology_dim<F>(C, n);
            if (p > R.first_stage) {
                ColumnReducer<F> red(f, C.dim(n));
                auto B = C.diff(n - 1);
                for (std::size_t j = 0; j < B.cols(); ++j) red.insert(B.col(j));
                long long r = 0;
                for (auto& z : prev_reps)
                    if (red.insert(step(YElem<F>{n, z}, p - 1).v)) ++r;
                info.rank_from_prev = r;
                bool bij = r == prev_h && r == info.h;
                run = bij ? run + 1 : 0;
            }
            R.stages.push_back(info);
            if (run >= s) {
                R.stable = true;
                R.value = info.h;
                R.stage = p;
                break;
            }
            prev_reps = cohomology_basis(C, n, f);
            prev_h = info.h;
        }
        return R;
    }

private:
    const Complex<F>* X_;
    const Complex<F>* Y_;
    int nmax_;
    mutable std::vector<std::unique_ptr<OmegaPower<F>>> omegas_;
    mutable std::vector<std::unique_ptr<YonedaHom<F>>> stages_;
};

// [g; q] ⊙_sg [f; p] = [Omega^p(g) ⊙ f; p + q]
template <class F>
SYElem<F> sy_compose(const SYHom<F>& YZ, const SYElem<F>& g, const SYHom<F>& XY, const SYElem<F>& f,
                     const SYHom<F>& XZ) {
    if (&XY.source() != &XZ.source() || &YZ.target() != &XZ.target())
        throw std::invalid_argument("sy_compose: mismatched contexts");
    int p = f.stage, q = g.stage;
    const auto& Yp = XY.omega(p);
    const auto& Zpq = XZ.omega(p + q);
    OmegaPower<F> Y0(YZ.source(), 0);
    YonedaHom<F> out(Yp.complex(), Zpq.complex(), XZ.cap(p + q));
    auto Og = omega_on_morphism(YZ.stage(q), g.rep, Y0, YZ.omega(q), p, out, Yp, Zpq);
    return {p + q, compose(out, Og, XY.stage(p), f.rep, XZ.stage(p + q))};
}

// phi(f) : SY(Lambda, X) -> SY(Lambda, Y), [g; q] -> [f; p] ⊙_sg [g; q]
template <class F>
SYElem<F> phi_apply(const SYHom<F>& XY, const SYElem<F>& f, const SYHom<F>& LX, const SYElem<F>& g,
                    const SYHom<F>& LY) {
    return sy_compose(XY, f, LX, g, LY);
}

// Retraction of phi at stage p: op is evaluated on [eta_X(x); 0] and read at
// stage p. Phi_sg(phi(f)) = f for f at stage p.
template <class F>
SYElem<F> phi_sg(const SYHom<F>& LX, const SYHom<F>& LY, const SYHom<F>& XY, int deg, int p,
                 const std::function<SYElem<F>(const SYElem<F>&)>& op) {
    auto rep = phi_retract(LX.stage(0), LY.stage(p), XY.stage(p), deg, [&](const YElem<F>& g) {
        auto r = op(SYElem<F>{0, g});
        if (r.stage > p) throw std::invalid_argument("phi_sg: operator output beyond the requested stage");
        return LY.lift(r, p).rep;
    });
    return {p, rep};
}

// u of degree -1 with delta(u) = [Id; 0], searched at stages 0..max_stage.
// H must be an SY(X, X) context with nmax >= 0.
template <class F>
std::optional<SYElem<F>> contraction_witness(const SYHom<F>& H, int max_stage) {
    if (&H.source() != &H.target()) throw std::invalid_argument("contraction witness needs SY(X, X)");
    auto id = H.identity();
    for (int p = 0; p <= max_stage; ++p) {
        auto target = H.lift(id, p);
        auto M = H.stage(p).delta_matrix(-1);
        auto u = solve(M, target.rep.v);
        if (u) return SYElem<F>{p, YElem<F>{-1, *u}};
    }
    return std::nullopt;
}

// stabilized dim Hom_{D_sg}(M, N[deg])
template <class F>
StabilizationReport dsg_hom(const Module<F>& M, const Module<F>& N, int deg, int s = 3, int max_stage = 10) {
    auto X = stalk(M), Y = stalk(N);
    SYHom<F> H(X, Y, deg);
    return H.cohomology(deg, s, max_stage);
}

} // namespace yl
