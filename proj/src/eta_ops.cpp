/*
   Copyright 2026 the etalift authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "etalift/eta_ops.hpp"

#include <map>
#include <mutex>
#include <sstream>

namespace etalift {

EtaOps::EtaOps(CtxPtr ctx)
    : ctx_(std::move(ctx)),
      one_(ctx_->one()),
      eta_(ctx_->eta()),
      eta_pm1_(ctx_->eta().pow(ctx_->prime().get() - 1)),
      eta_p_(ctx_->eta().pow(ctx_->prime().get())) {}

RingElem EtaOps::oplus(const RingElem& x, const RingElem& y) const {
    return x + y + x * y * eta_;
}

RingElem EtaOps::ominus(const RingElem& x, const RingElem& y) const {
    auto inv = try_invert(phi(y));
    if (!inv) throw UnitRequiredError("ominus: 1 + y*eta is not a unit");
    return (x - y) * *inv;
}

RingElem EtaOps::star(long s, const RingElem& a) const {
    if (s < 0) throw ArgumentError("star: s must be nonnegative");
    RingElem acc = ctx_->zero();
    for (long i = 0; i < s; ++i) acc = oplus(acc, a);
    return acc;
}

RingElem EtaOps::oplus_p(const RingElem& x, const RingElem& y) const {
    return x + y + x * y * eta_p_;
}

RingElem EtaOps::ominus_p(const RingElem& x, const RingElem& y) const {
    auto inv = try_invert(phi_p(y));
    if (!inv) throw UnitRequiredError("ominus_p: 1 + y*eta^p is not a unit");
    return (x - y) * *inv;
}

RingElem EtaOps::star_p(long r, const RingElem& z) const {
    if (r < 0) throw ArgumentError("star_p: r must be nonnegative");
    RingElem acc = ctx_->zero();
    for (long i = 0; i < r; ++i) acc = oplus_p(acc, z);
    return acc;
}

std::vector<CycInt> EtaOps::sharp_poly(PrimeP p, long pr) {
    static std::map<std::pair<int, long>, std::vector<CycInt>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(p.get(), pr);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    // expand ((1 + Z eta)^{pr} - 1)/eta^p in Z[rho][Z]
    auto lift = RingCtx::make(CoeffRing(p), {"Z"});
    RingElem body = (lift->one() + lift->var(0) * lift->eta()).pow((unsigned long)pr) -
                    lift->one();
    RingElem g = exact_divide_by_eta_power(body, p.get());
    std::vector<CycInt> coeffs((size_t)pr + 1, CycInt(p));
    for (const auto& [m, c] : g.terms()) coeffs[m[0]] = c;
    cache.emplace(key, coeffs);
    return coeffs;
}

RingElem EtaOps::sharp_p(long pr, const RingElem& z) const {
    const int p = ctx_->prime().get();
    if (pr <= 0 || pr % p != 0)
        throw ArgumentError("sharp_p: pr must be a positive multiple of p");
    auto coeffs = sharp_poly(ctx_->prime(), pr);
    // Horner evaluation of the generic polynomial at z
    RingElem acc = ctx_->zero();
    for (size_t k = coeffs.size(); k-- > 1;) {
        acc = acc * z;
        if (!coeffs[k].is_zero()) acc = acc + ctx_->constant(coeffs[k]);
    }
    acc = acc * z;  // the generic polynomial has zero constant term
    return acc;
}

RingElem EtaOps::delta_tau(const RingHom& tau, const RingElem& x) const {
    CycInt d = CycInt::delta(ctx_->prime(), tau.twist());
    return tau.apply(x) * d;
}

RingElem EtaOps::delta_p_tau(const RingHom& tau, const RingElem& x) const {
    CycInt d = CycInt::delta(ctx_->prime(), tau.twist()).pow(ctx_->prime().get());
    return tau.apply(x) * d;
}

// ---------------------------------------------------------------------------
// eta-calculus identity suite
// ---------------------------------------------------------------------------

int smallest_split_prime(int p) {
    for (int q = p + 1;; q += 1)
        if (PrimeP::is_prime(q) && q % p == 1 && q != p) return q;
}

RingElem sample_element(const CtxPtr& ctx, std::mt19937_64& rng, int max_deg, long bound) {
    std::uniform_int_distribution<long> coeff(-bound, bound);
    std::uniform_int_distribution<int> deg(0, max_deg);
    TermMap t;
    int nterms = 1 + (int)(rng() % 3);
    for (int i = 0; i < nterms; ++i) {
        Mono m(ctx->nvars(), 0);
        for (size_t v = 0; v < ctx->nvars(); ++v) m[v] = (uint32_t)deg(rng);
        std::vector<mpz_class> c(ctx->prime().phi());
        for (auto& x : c) x = coeff(rng);
        CycInt cc(ctx->prime(), std::move(c));
        auto it = t.find(m);
        if (it == t.end())
            t.emplace(std::move(m), std::move(cc));
        else
            it->second = it->second + cc;
    }
    return ctx->from_terms(std::move(t));
}

bool SuiteReport::all_pass() const {
    for (const auto& r : results)
        if (r.status == "fail") return false;
    return true;
}

namespace {

long smallest_primitive_root(int p) {
    if (p == 2) return 1;
    for (long s = 2; s < p; ++s)
        if (PrimeP::is_primitive_root(s, p)) return s;
    throw InternalCheckError("no primitive root found");
}

struct Env {
    const EtaOps* ops = nullptr;
    const RingHom* tau = nullptr;
    RingElem x, y;
    long s = 1, t = 1, r = 1;
    int p = 0;
};

using IdPair = std::optional<std::pair<RingElem, RingElem>>;

struct IdentitySpec {
    int index;
    const char* formula;
    bool needs_tau;
    bool needs_unit_y;  // 1 + y*eta must be invertible (identity 8)
    bool uses_s, uses_t, uses_r;
    IdPair (*fn)(const Env&);
};

const std::vector<IdentitySpec>& identity_table() {
    static const std::vector<IdentitySpec> table = {
        {1, "phi_p(x) = phi(x*eta^{p-1})", false, false, false, false, false,
         [](const Env& e) -> IdPair {
             return std::make_pair(e.ops->phi_p(e.x), e.ops->phi(e.x * e.ops->eta_pm1()));
         }},
        {2, "s*(x (+) y) = (s*x) (+) (s*y)", false, false, true, false, false,
         [](const Env& e) -> IdPair {
             return std::make_pair(e.ops->star(e.s, e.ops->oplus(e.x, e.y)),
                                   e.ops->oplus(e.ops->star(e.s, e.x), e.ops->star(e.s, e.y)));
         }},
        {3, "s*_p(x (+)_p y) = (s*_p x) (+)_p (s*_p y)", false, false, true, false, false,
         [](const Env& e) -> IdPair {
             return std::make_pair(
                 e.ops->star_p(e.s, e.ops->oplus_p(e.x, e.y)),
                 e.ops->oplus_p(e.ops->star_p(e.s, e.x), e.ops->star_p(e.s, e.y)));
         }},
        {4, "(pr #_p x)*eta^{p-1} = pr * x", false, false, false, false, true,
         [](const Env& e) -> IdPair {
             long pr = e.p * e.r;
             return std::make_pair(e.ops->sharp_p(pr, e.x) * e.ops->eta_pm1(),
                                   e.ops->star(pr, e.x));
         }},
        {5, "p *_p x = p #_p (x*eta^{p-1})", false, false, false, false, false,
         [](const Env& e) -> IdPair {
             return std::make_pair(e.ops->star_p(e.p, e.x),
                                   e.ops->sharp_p(e.p, e.x * e.ops->eta_pm1()));
         }},
        {6, "pr #_p x = p #_p (r*x) = r *_p (p #_p x)", false, false, false, false, true,
         [](const Env& e) -> IdPair {
             long pr = e.p * e.r;
             RingElem lhs = e.ops->sharp_p(pr, e.x);
             RingElem mid = e.ops->sharp_p(e.p, e.ops->star(e.r, e.x));
             if (!(lhs == mid)) return std::make_pair(lhs, mid);
             return std::make_pair(lhs, e.ops->star_p(e.r, e.ops->sharp_p(e.p, e.x)));
         }},
        {7, "pr #_p (a (+) b) = (pr #_p a) (+)_p (pr #_p b)", false, false, false, false, true,
         [](const Env& e) -> IdPair {
             long pr = e.p * e.r;
             return std::make_pair(
                 e.ops->sharp_p(pr, e.ops->oplus(e.x, e.y)),
                 e.ops->oplus_p(e.ops->sharp_p(pr, e.x), e.ops->sharp_p(pr, e.y)));
         }},
        {8, "pr #_p (a (-) b) = (pr #_p a) (-)_p (pr #_p b)", false, true, false, false, true,
         [](const Env& e) -> IdPair {
             long pr = e.p * e.r;
             return std::make_pair(
                 e.ops->sharp_p(pr, e.ops->ominus(e.x, e.y)),
                 e.ops->ominus_p(e.ops->sharp_p(pr, e.x), e.ops->sharp_p(pr, e.y)));
         }},
        {9, "pr #_p (t * x) = t *_p (pr #_p x)", false, false, false, true, true,
         [](const Env& e) -> IdPair {
             long pr = e.p * e.r;
             return std::make_pair(e.ops->sharp_p(pr, e.ops->star(e.t, e.x)),
                                   e.ops->star_p(e.t, e.ops->sharp_p(pr, e.x)));
         }},
        {10, "pr #_p (x*eta^{p-1}) = pr *_p x", false, false, false, false, true,
         [](const Env& e) -> IdPair {
             long pr = e.p * e.r;
             return std::make_pair(e.ops->sharp_p(pr, e.x * e.ops->eta_pm1()),
                                   e.ops->star_p(pr, e.x));
         }},
        {11, "(a (+)_p b)*eta^{p-1} = a*eta^{p-1} (+) b*eta^{p-1}", false, false, false, false, false,
         [](const Env& e) -> IdPair {
             return std::make_pair(
                 e.ops->oplus_p(e.x, e.y) * e.ops->eta_pm1(),
                 e.ops->oplus(e.x * e.ops->eta_pm1(), e.y * e.ops->eta_pm1()));
         }},
        {12, "(t *_p x)*eta^{p-1} = t * (x*eta^{p-1})", false, false, false, true, false,
         [](const Env& e) -> IdPair {
             return std::make_pair(e.ops->star_p(e.t, e.x) * e.ops->eta_pm1(),
                                   e.ops->star(e.t, e.x * e.ops->eta_pm1()));
         }},
        {13, "dt(x (+) y) = dt(x) (+) dt(y)", true, false, false, false, false,
         [](const Env& e) -> IdPair {
             return std::make_pair(e.ops->delta_tau(*e.tau, e.ops->oplus(e.x, e.y)),
                                   e.ops->oplus(e.ops->delta_tau(*e.tau, e.x),
                                                e.ops->delta_tau(*e.tau, e.y)));
         }},
        {14, "dpt(x (+)_p y) = dpt(x) (+)_p dpt(y)", true, false, false, false, false,
         [](const Env& e) -> IdPair {
             return std::make_pair(e.ops->delta_p_tau(*e.tau, e.ops->oplus_p(e.x, e.y)),
                                   e.ops->oplus_p(e.ops->delta_p_tau(*e.tau, e.x),
                                                  e.ops->delta_p_tau(*e.tau, e.y)));
         }},
        {15, "dt(t * x) = t * dt(x)", true, false, false, true, false,
         [](const Env& e) -> IdPair {
             return std::make_pair(e.ops->delta_tau(*e.tau, e.ops->star(e.t, e.x)),
                                   e.ops->star(e.t, e.ops->delta_tau(*e.tau, e.x)));
         }},
        {16, "dpt(t *_p x) = t *_p dpt(x)", true, false, false, true, false,
         [](const Env& e) -> IdPair {
             return std::make_pair(e.ops->delta_p_tau(*e.tau, e.ops->star_p(e.t, e.x)),
                                   e.ops->star_p(e.t, e.ops->delta_p_tau(*e.tau, e.x)));
         }},
        {17, "dpt(pr #_p x) = pr #_p dt(x)", true, false, false, false, true,
         [](const Env& e) -> IdPair {
             long pr = e.p * e.r;
             return std::make_pair(e.ops->delta_p_tau(*e.tau, e.ops->sharp_p(pr, e.x)),
                                   e.ops->sharp_p(pr, e.ops->delta_tau(*e.tau, e.x)));
         }},
        {18, "dt(x*eta^{p-1}) = dpt(x)*eta^{p-1}", true, false, false, false, false,
         [](const Env& e) -> IdPair {
             return std::make_pair(e.ops->delta_tau(*e.tau, e.x * e.ops->eta_pm1()),
                                   e.ops->delta_p_tau(*e.tau, e.x) * e.ops->eta_pm1());
         }},
    };
    return table;
}

std::string describe(const Env& e, const RingElem& lhs, const RingElem& rhs) {
    std::ostringstream os;
    os << "x=" << e.x.to_string() << ", y=" << e.y.to_string() << ", s=" << e.s
       << ", t=" << e.t << ", r=" << e.r << "; lhs=" << lhs.to_string()
       << ", rhs=" << rhs.to_string();
    return os.str();
}

// one identity checked symbolically: operands are the ring variables, the
// integer parameters are enumerated over a fixed grid
IdentityResult run_symbolic(const IdentitySpec& spec, const EtaOps& ops, const RingHom* tau,
                            const RingElem& x, const RingElem& y, const std::string& label) {
    IdentityResult res;
    res.index = spec.index;
    res.formula = spec.formula;
    res.ring = label;
    const int p = ops.ctx()->prime().get();
    if (spec.needs_tau && tau == nullptr) {
        res.status = "skipped";
        res.counterexample = "no tau action on this ring";
        return res;
    }
    int count = 0;
    std::vector<long> s_grid = spec.uses_s ? std::vector<long>{0, 1, 2, p, p + 1}
                                           : std::vector<long>{1};
    std::vector<long> t_grid{1};
    if (spec.uses_t) {
        t_grid.clear();
        for (long t = 0; t <= 2 * p; ++t) t_grid.push_back(t);
    }
    std::vector<long> r_grid = spec.uses_r ? std::vector<long>{1, 2} : std::vector<long>{1};
    for (long s : s_grid)
        for (long t : t_grid)
            for (long r : r_grid) {
                Env env{&ops, tau, x, y, s, t, r, p};
                auto pr = spec.fn(env);
                ++count;
                if (pr && !(pr->first == pr->second)) {
                    res.status = "fail";
                    res.samples = count;
                    res.counterexample = describe(env, pr->first, pr->second);
                    return res;
                }
            }
    res.status = "pass";
    res.samples = count;
    return res;
}

IdentityResult run_sampled(const IdentitySpec& spec, const EtaOps& ops, const RingHom* tau,
                           const std::string& label, int samples, std::mt19937_64& rng) {
    IdentityResult res;
    res.index = spec.index;
    res.formula = spec.formula;
    res.ring = label;
    const int p = ops.ctx()->prime().get();
    if (spec.needs_tau && tau == nullptr) {
        res.status = "skipped";
        res.counterexample = "no tau action on this ring";
        return res;
    }
    for (int i = 0; i < samples; ++i) {
        Env env{&ops, tau, ops.ctx()->zero(), ops.ctx()->zero(),
                (long)(rng() % (2 * p + 1)), (long)(rng() % (2 * p + 1)),
                (long)(1 + rng() % 2), p};
        env.x = sample_element(ops.ctx(), rng, 2, 1000);
        bool found = false;
        for (int tries = 0; tries < 200; ++tries) {
            env.y = sample_element(ops.ctx(), rng, 2, 1000);
            if (!spec.needs_unit_y) {
                found = true;
                break;
            }
            try {
                if (try_invert(ops.phi(env.y)).has_value()) {
                    found = true;
                    break;
                }
            } catch (const UndecidableError&) {
                break;
            }
        }
        if (!found) {
            res.status = "skipped";
            res.counterexample = "could not sample a unit 1 + y*eta";
            return res;
        }
        auto pr = spec.fn(env);
        res.samples = i + 1;
        if (pr && !(pr->first == pr->second)) {
            res.status = "fail";
            res.counterexample = describe(env, pr->first, pr->second);
            return res;
        }
    }
    res.status = "pass";
    return res;
}

const RingHom* make_tau_if_possible(const CtxPtr& ctx, long s, std::vector<RingHom>& keep) {
    try {
        std::vector<RingElem> images;
        for (size_t v = 0; v < ctx->nvars(); ++v) images.push_back(ctx->var(v));
        keep.push_back(RingHom::make(ctx, ctx, s, std::move(images)));
        return &keep.back();
    } catch (const Error&) {
        return nullptr;
    }
}

}  // namespace

SuiteReport identity_suite_on(const CtxPtr& ctx, const std::string& label, PrimeP p,
                                       int samples, uint64_t seed) {
    SuiteReport rep;
    rep.p = p.get();
    rep.seed = seed;
    rep.samples = samples;
    EtaOps ops(ctx);
    long s = smallest_primitive_root(p.get());
    std::vector<RingHom> keep;
    keep.reserve(2);
    const RingHom* tau = make_tau_if_possible(ctx, s, keep);
    std::mt19937_64 rng(seed);
    for (const auto& spec : identity_table())
        rep.results.push_back(run_sampled(spec, ops, tau, label, samples, rng));
    return rep;
}

SuiteReport identity_suite(PrimeP p, int samples, uint64_t seed) {
    SuiteReport rep;
    rep.p = p.get();
    rep.seed = seed;
    rep.samples = samples;
    const long s = smallest_primitive_root(p.get());

    // symbolic ring Z[rho][x,y] with tau fixing the variables
    auto G = RingCtx::make(CoeffRing(p), {"x", "y"});
    EtaOps gops(G);
    std::vector<RingHom> keep;
    keep.reserve(4);
    const RingHom* gtau = make_tau_if_possible(G, s, keep);

    // localized ring Z[rho][a,b](1/(1+b eta)) for the ominus identity
    auto plain = RingCtx::make(CoeffRing(p), {"a", "b"});
    RingElem d = plain->one() + plain->var("b") * plain->eta();
    auto Gloc = RingCtx::make(CoeffRing(p), {"a", "b"}, {}, {{"Binv", d.terms()}});
    EtaOps locops(Gloc);

    for (const auto& spec : identity_table()) {
        if (spec.needs_unit_y) {
            rep.results.push_back(run_symbolic(spec, locops, nullptr, Gloc->var("a"),
                                               Gloc->var("b"),
                                               "Z[rho][a,b](1/(1+b*eta)) symbolic"));
        } else {
            rep.results.push_back(run_symbolic(spec, gops, gtau, G->var("x"), G->var("y"),
                                               "Z[rho][x,y] symbolic"));
        }
    }

    // finite specializations, all with tau-stable ideals
    struct SpecRing {
        std::string label;
        CoeffRing base;
    };
    mpz_class p2 = mpz_class(p.get()) * p.get();
    std::vector<SpecRing> specs;
    specs.push_back({"Z[rho]/(p^2)", CoeffRing::quotient(p, p2, 0)});
    specs.push_back({"F_p", CoeffRing::quotient(p, 0, 1)});
    specs.push_back({"Z[rho]/(q)", CoeffRing::quotient(p, smallest_split_prime(p.get()), 0)});

    std::mt19937_64 rng(seed);
    for (const auto& sr : specs) {
        auto ctx = RingCtx::make(sr.base, {});
        EtaOps ops(ctx);
        std::vector<RingHom> keep2;
        keep2.reserve(2);
        const RingHom* tau = make_tau_if_possible(ctx, s, keep2);
        for (const auto& spec : identity_table())
            rep.results.push_back(run_sampled(spec, ops, tau, sr.label, samples, rng));
    }
    return rep;
}

}  // namespace etalift
