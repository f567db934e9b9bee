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

#include "etalift/ring.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <sstream>

namespace etalift {

// ---------------------------------------------------------------------------
// CoeffRing
// ---------------------------------------------------------------------------

CoeffRing::CoeffRing(PrimeP p) : p_(p) {}

CoeffRing::CoeffRing(PrimeP p, std::vector<CycInt> gens) : p_(p), gens_(std::move(gens)) {
    ZMat rows;
    for (const auto& g : gens_) {
        if (g.prime() != p_) throw StructuralError("ideal generator has wrong p");
        if (g.is_zero()) continue;
        for (int k = 0; k < p_.phi(); ++k) {
            CycInt v = g * CycInt::rho_pow(p_, k);
            rows.push_back(ZVec(v.coeffs().begin(), v.coeffs().end()));
        }
    }
    hnf_ = hnf(std::move(rows));
    if (hnf_.empty()) gens_.clear();  // zero ideal
}

CoeffRing CoeffRing::quotient(PrimeP p, const mpz_class& m, int eta_power) {
    std::vector<CycInt> gens;
    if (m != 0) gens.push_back(CycInt::from_int(p, m));
    if (eta_power > 0) gens.push_back(CycInt::eta(p).pow(eta_power));
    return CoeffRing(p, std::move(gens));
}

CoeffRing CoeffRing::residue_field(PrimeP p, const mpz_class& q, const mpz_class& r0) {
    // require Phi_p(r0) = 0 mod q so the map rho -> r0 is well defined
    mpz_class phi = 0, pw = 1;
    for (int i = 0; i < p.get(); ++i) {
        phi += pw;
        pw *= r0;
    }
    if (phi % q != 0)
        throw ArgumentError("rho image does not satisfy the cyclotomic relation mod q");
    CycInt lin = CycInt::rho(p) - CycInt::from_int(p, r0);
    return CoeffRing(p, {CycInt::from_int(p, q), lin});
}

bool CoeffRing::is_finite() const { return hnf_.size() == (size_t)p_.phi(); }

mpz_class CoeffRing::cardinality() const {
    auto idx = lattice_index(hnf_, p_.phi());
    if (!idx) throw StructuralError("cardinality of an infinite coefficient ring");
    return *idx;
}

CycInt CoeffRing::reduce(CycInt a) const {
    if (hnf_.empty()) return a;
    ZVec v(a.coeffs().begin(), a.coeffs().end());
    v = lattice_reduce(hnf_, std::move(v));
    return CycInt(p_, std::vector<mpz_class>(v.begin(), v.end()));
}

bool CoeffRing::ideal_contains(const CycInt& a) const {
    if (hnf_.empty()) return a.is_zero();
    ZVec v(a.coeffs().begin(), a.coeffs().end());
    return lattice_contains(hnf_, v);
}

bool CoeffRing::tau_stable(long s) const {
    for (const auto& g : gens_)
        if (!ideal_contains(g.subst_rho_pow(s))) return false;
    return true;
}

bool CoeffRing::operator==(const CoeffRing& o) const {
    return p_ == o.p_ && hnf_ == o.hnf_;
}

// ---------------------------------------------------------------------------
// monomial and term-map helpers
// ---------------------------------------------------------------------------

Mono mono_mul(const Mono& a, const Mono& b) {
    Mono r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

bool mono_divides(const Mono& d, const Mono& m) {
    for (size_t i = 0; i < d.size(); ++i)
        if (d[i] > m[i]) return false;
    return true;
}

TermMap resize_terms(const TermMap& t, size_t new_nvars) {
    TermMap r;
    for (const auto& [m, c] : t) {
        if (m.size() > new_nvars)
            throw StructuralError("resize_terms: shrinking a monomial");
        Mono nm = m;
        nm.resize(new_nvars, 0);
        r.emplace(std::move(nm), c);
    }
    return r;
}

namespace {

void add_term(TermMap& t, const Mono& m, const CycInt& c) {
    if (c.is_zero()) return;
    auto it = t.find(m);
    if (it == t.end()) {
        t.emplace(m, c);
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) t.erase(it);
    }
}

// apply power rules to a fixpoint, then canonicalize coefficients
void normalize_terms(const CoeffRing& base, const std::vector<PowerRule>& rules, TermMap& t) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = t.begin(); it != t.end(); ++it) {
            for (const auto& r : rules) {
                if (it->first[r.var] < r.n) continue;
                Mono m = it->first;
                CycInt c = it->second;
                t.erase(it);
                m[r.var] -= r.n;
                for (const auto& [rm, rc] : r.rhs) add_term(t, mono_mul(m, rm), c * rc);
                changed = true;
                break;
            }
            if (changed) break;
        }
    }
    if (!base.is_exact()) {
        TermMap out;
        for (const auto& [m, c] : t) {
            CycInt rc = base.reduce(c);
            if (!rc.is_zero()) out.emplace(m, rc);
        }
        t = std::move(out);
    }
}

TermMap mul_terms(const TermMap& a, const TermMap& b) {
    TermMap r;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) add_term(r, mono_mul(ma, mb), ca * cb);
    return r;
}

// leading-term exact division of raw term maps; base must be a domain (exact)
std::optional<TermMap> divide_terms(const TermMap& f, const TermMap& g) {
    if (g.empty()) return std::nullopt;
    TermMap q;
    TermMap r = f;
    const auto& ltg = *g.rbegin();
    while (!r.empty()) {
        const auto& ltr = *r.rbegin();
        if (!mono_divides(ltg.first, ltr.first)) return std::nullopt;
        auto c = cyc_solve(ltg.second, ltr.second);
        if (!c) return std::nullopt;
        Mono qm(ltr.first.size());
        for (size_t i = 0; i < qm.size(); ++i) qm[i] = ltr.first[i] - ltg.first[i];
        add_term(q, qm, *c);
        for (const auto& [gm, gc] : g) add_term(r, mono_mul(qm, gm), -(*c * gc));
    }
    return q;
}

}  // namespace

// ---------------------------------------------------------------------------
// RingCtx
// ---------------------------------------------------------------------------

RingCtx::RingCtx(CoeffRing base, std::vector<std::string> vars, std::vector<PowerRule> rules,
                 std::vector<TermMap> denoms, std::vector<std::string> denom_names)
    : base_(std::move(base)),
      vars_(std::move(vars)),
      rules_(std::move(rules)),
      denom_polys_(std::move(denoms)),
      denom_names_(std::move(denom_names)),
      rule_of_var_(vars_.size(), -1) {
    for (size_t i = 0; i < rules_.size(); ++i) rule_of_var_[rules_[i].var] = (int)i;
}

CtxPtr RingCtx::make(CoeffRing base, std::vector<std::string> vars, std::vector<PowerRule> rules,
                     std::vector<std::pair<std::string, TermMap>> denoms) {
    const size_t nv = vars.size();
    for (auto& r : rules) {
        if (r.var >= nv) throw StructuralError("rule variable out of range");
        if (r.n == 0) throw StructuralError("rule power must be positive");
        r.rhs = resize_terms(r.rhs, nv);
    }
    // normalize rule right-hand sides against the full rule set
    for (auto& r : rules) {
        normalize_terms(base, rules, r.rhs);
        for (const auto& [m, c] : r.rhs)
            if (m[r.var] >= r.n)
                throw StructuralError("rule rhs does not lower the power of its variable");
    }
    std::vector<TermMap> dpolys;
    std::vector<std::string> dnames;
    for (auto& [name, d] : denoms) {
        if (!base.is_exact())
            throw StructuralError("declared inverses require the exact base Z[rho]");
        TermMap dt = resize_terms(d, nv);
        normalize_terms(base, rules, dt);
        Mono unit_mono(nv, 0);
        auto it = dt.find(unit_mono);
        if (it == dt.end() || !it->second.is_one())
            throw StructuralError("denominator must have constant term 1");
        for (const auto& r : rules)
            for (const auto& [m, c] : dt)
                if (m[r.var] != 0)
                    throw StructuralError("denominator may not involve a ruled variable");
        dpolys.push_back(std::move(dt));
        dnames.push_back(name);
    }
    return CtxPtr(new RingCtx(std::move(base), std::move(vars), std::move(rules),
                              std::move(dpolys), std::move(dnames)));
}

size_t RingCtx::var_index(const std::string& name) const {
    for (size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return i;
    throw StructuralError("unknown variable: " + name);
}

const PowerRule* RingCtx::rule_for(size_t var) const {
    int i = rule_of_var_[var];
    return i < 0 ? nullptr : &rules_[i];
}

bool RingCtx::is_finite_ring() const {
    if (!base_.is_finite()) return false;
    for (size_t v = 0; v < vars_.size(); ++v)
        if (!rule_for(v)) return false;
    return true;
}

mpz_class RingCtx::cardinality() const {
    if (!is_finite_ring()) throw StructuralError("cardinality of an infinite ring");
    mpz_class base_card = base_.cardinality();
    mpz_class nmonos = 1;  // the module monomial basis has prod-of-bounds members
    for (size_t v = 0; v < vars_.size(); ++v) nmonos *= rule_for(v)->n;
    mpz_class card;
    mpz_pow_ui(card.get_mpz_t(), base_card.get_mpz_t(), nmonos.get_ui());
    return card;
}

RingElem RingCtx::zero() const {
    return RingElem(shared_from_this(), TermMap{}, std::vector<uint32_t>(ndenoms(), 0));
}

RingElem RingCtx::one() const { return from_int(1); }

RingElem RingCtx::from_int(const mpz_class& n) const {
    return constant(CycInt::from_int(prime(), n));
}

RingElem RingCtx::constant(const CycInt& c) const {
    TermMap t;
    CycInt rc = base_.reduce(c);
    if (!rc.is_zero()) t.emplace(Mono(nvars(), 0), rc);
    return RingElem(shared_from_this(), std::move(t), std::vector<uint32_t>(ndenoms(), 0));
}

RingElem RingCtx::var(size_t i) const {
    if (i >= nvars()) throw StructuralError("variable index out of range");
    TermMap t;
    Mono m(nvars(), 0);
    m[i] = 1;
    t.emplace(std::move(m), CycInt::from_int(prime(), 1));
    return from_terms(std::move(t));
}

RingElem RingCtx::var(const std::string& name) const { return var(var_index(name)); }

RingElem RingCtx::denom_inverse(size_t i) const {
    if (i >= ndenoms()) throw StructuralError("denominator index out of range");
    TermMap t;
    t.emplace(Mono(nvars(), 0), CycInt::from_int(prime(), 1));
    std::vector<uint32_t> den(ndenoms(), 0);
    den[i] = 1;
    return RingElem(shared_from_this(), std::move(t), std::move(den));
}

RingElem RingCtx::from_terms(TermMap t) const {
    normalize_terms(base_, rules_, t);
    return RingElem(shared_from_this(), std::move(t), std::vector<uint32_t>(ndenoms(), 0));
}

RingElem RingCtx::eta() const { return constant(CycInt::eta(prime())); }
RingElem RingCtx::rho() const { return constant(CycInt::rho(prime())); }

// ---------------------------------------------------------------------------
// RingElem
// ---------------------------------------------------------------------------

RingElem::RingElem(CtxPtr ctx, TermMap num, std::vector<uint32_t> den)
    : ctx_(std::move(ctx)), num_(std::move(num)), den_(std::move(den)) {
    if (den_.size() != ctx_->ndenoms()) throw StructuralError("denominator vector size");
    // fraction normal form: cancel each denominator while it divides the
    // numerator; zero resets the denominator entirely
    if (num_.empty()) {
        std::fill(den_.begin(), den_.end(), 0);
        return;
    }
    for (size_t i = 0; i < den_.size(); ++i) {
        while (den_[i] > 0) {
            auto q = divide_terms(num_, ctx_->denom_polys()[i]);
            if (!q) break;
            num_ = std::move(*q);
            --den_[i];
        }
    }
}

bool RingElem::is_polynomial() const {
    return std::all_of(den_.begin(), den_.end(), [](uint32_t e) { return e == 0; });
}

std::optional<CycInt> RingElem::as_constant() const {
    if (!is_polynomial()) return std::nullopt;
    if (num_.empty()) return CycInt(ctx_->prime());
    if (num_.size() != 1) return std::nullopt;
    const auto& [m, c] = *num_.begin();
    if (!std::all_of(m.begin(), m.end(), [](uint32_t e) { return e == 0; }))
        return std::nullopt;
    return c;
}

namespace {

void check_ctx(const RingElem& a, const RingElem& b) {
    if (a.ctx() != b.ctx()) throw StructuralError("elements belong to different rings");
}

// multiply a term map by a power of a denominator polynomial
TermMap scale_by_denoms(const RingCtx& ctx, TermMap t, const std::vector<uint32_t>& pw) {
    for (size_t i = 0; i < pw.size(); ++i)
        for (uint32_t k = 0; k < pw[i]; ++k) t = mul_terms(t, ctx.denom_polys()[i]);
    return t;
}

}  // namespace

RingElem RingElem::operator+(const RingElem& o) const {
    check_ctx(*this, o);
    std::vector<uint32_t> den(den_.size());
    std::vector<uint32_t> lift_a(den_.size()), lift_b(den_.size());
    for (size_t i = 0; i < den_.size(); ++i) {
        den[i] = std::max(den_[i], o.den_[i]);
        lift_a[i] = den[i] - den_[i];
        lift_b[i] = den[i] - o.den_[i];
    }
    TermMap na = scale_by_denoms(*ctx_, num_, lift_a);
    TermMap nb = scale_by_denoms(*ctx_, o.num_, lift_b);
    for (const auto& [m, c] : nb) add_term(na, m, c);
    normalize_terms(ctx_->base(), ctx_->rules(), na);
    return RingElem(ctx_, std::move(na), std::move(den));
}

RingElem RingElem::operator-(const RingElem& o) const { return *this + (-o); }

RingElem RingElem::operator-() const {
    TermMap t;
    for (const auto& [m, c] : num_) t.emplace(m, -c);
    return RingElem(ctx_, std::move(t), den_);
}

RingElem RingElem::operator*(const RingElem& o) const {
    check_ctx(*this, o);
    TermMap t = mul_terms(num_, o.num_);
    normalize_terms(ctx_->base(), ctx_->rules(), t);
    std::vector<uint32_t> den(den_.size());
    for (size_t i = 0; i < den_.size(); ++i) den[i] = den_[i] + o.den_[i];
    return RingElem(ctx_, std::move(t), std::move(den));
}

RingElem RingElem::operator*(const CycInt& c) const {
    TermMap t;
    for (const auto& [m, tc] : num_) {
        CycInt v = ctx_->base().reduce(tc * c);
        if (!v.is_zero()) t.emplace(m, v);
    }
    return RingElem(ctx_, std::move(t), den_);
}

RingElem RingElem::operator*(const mpz_class& n) const {
    return *this * CycInt::from_int(ctx_->prime(), n);
}

RingElem RingElem::pow(unsigned long e) const {
    RingElem acc = ctx_->one();
    RingElem base = *this;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
        if (e == 0) break;
    }
    return acc;
}

bool RingElem::operator==(const RingElem& o) const {
    check_ctx(*this, o);
    return den_ == o.den_ && num_ == o.num_;
}

std::string RingElem::to_string() const {
    std::ostringstream os;
    if (num_.empty()) {
        os << "0";
    } else {
        bool first = true;
        // print highest monomial first
        for (auto it = num_.rbegin(); it != num_.rend(); ++it) {
            if (!first) os << " + ";
            first = false;
            const auto& [m, c] = *it;
            bool has_var = std::any_of(m.begin(), m.end(), [](uint32_t e) { return e != 0; });
            std::string cs = c.to_string();
            bool simple = c.is_one();
            if (!has_var) {
                os << "(" << cs << ")";
            } else {
                if (!simple) os << "(" << cs << ")*";
                bool firstv = true;
                for (size_t v = 0; v < m.size(); ++v) {
                    if (m[v] == 0) continue;
                    if (!firstv) os << "*";
                    firstv = false;
                    os << ctx_->vars()[v];
                    if (m[v] > 1) os << "^" << m[v];
                }
            }
        }
    }
    for (size_t i = 0; i < den_.size(); ++i)
        if (den_[i] > 0) os << " / " << ctx_->denom_names()[i] << "^" << den_[i];
    return os.str();
}

// ---------------------------------------------------------------------------
// inversion and exact division
// ---------------------------------------------------------------------------

std::optional<RingElem> try_invert(const RingElem& a) {
    const auto& ctx = a.ctx();
    if (a.is_zero()) {
        // the zero ring has 0 = 1 invertible; excluded by construction elsewhere
        return std::nullopt;
    }
    if (ctx->base().is_exact()) {
        // units of Z[rho][vars] localized at the D_i: (unit of Z[rho]) * prod D_i^k
        TermMap rem = a.terms();
        std::vector<uint32_t> e(ctx->ndenoms(), 0);
        for (size_t i = 0; i < ctx->ndenoms(); ++i) {
            while (true) {
                auto q = divide_terms(rem, ctx->denom_polys()[i]);
                if (!q) break;
                rem = std::move(*q);
                ++e[i];
            }
        }
        if (rem.size() != 1) return std::nullopt;
        const auto& [m, c] = *rem.begin();
        if (std::any_of(m.begin(), m.end(), [](uint32_t x) { return x != 0; }))
            return std::nullopt;
        auto cinv = cyc_invert(c);
        if (!cinv) return std::nullopt;
        // a = c * prod D^e / prod D^den  =>  a^{-1} = c^{-1} * prod D^den / prod D^e
        TermMap num;
        num.emplace(Mono(ctx->nvars(), 0), *cinv);
        num = scale_by_denoms(*ctx, std::move(num), a.den());
        return RingElem(ctx, std::move(num), e);
    }
    if (ctx->is_finite_ring()) {
        // solve x * a = 1 over the flattened Z-module: x * M_a = e modulo the
        // ring's zero lattice
        ModuleBasis mb = module_basis(ctx);
        ZMat rows = mul_matrix(mb, a);
        const size_t n = mb.dim();
        for (const auto& zr : mb.zero_lattice) rows.push_back(zr);
        ZVec target = flatten(mb, ctx->one());
        auto y = solve_in_span(rows, target);
        if (!y) return std::nullopt;
        ZVec x(n, mpz_class(0));
        // combination coefficients on the M_a block give the inverse coordinates
        for (size_t i = 0; i < n; ++i) x[i] = (*y)[i];
        RingElem inv = unflatten(mb, x);
        if (!(inv * a == ctx->one()))
            throw InternalCheckError("finite-ring inverse failed to verify");
        return inv;
    }
    throw UndecidableError(
        "unit status is undecidable here; work generically or declare the inverse");
}

bool is_unit(const RingElem& a) { return try_invert(a).has_value(); }

std::optional<RingElem> exact_divide(const RingElem& a, const RingElem& b) {
    check_ctx(a, b);
    if (!a.ctx()->base().is_exact())
        throw StructuralError("exact_divide requires the exact base");
    if (!a.is_polynomial() || !b.is_polynomial())
        throw StructuralError("exact_divide operates on polynomials");
    if (b.is_zero()) return std::nullopt;
    if (a.is_zero()) return a.ctx()->zero();
    auto q = divide_terms(a.terms(), b.terms());
    if (!q) return std::nullopt;
    return a.ctx()->from_terms(std::move(*q));
}

bool divisible_by_eta_power(const RingElem& a, int k) {
    if (!a.ctx()->base().is_exact()) return false;
    for (const auto& [m, c] : a.terms())
        if (!cyc_div_eta_pow(c, k)) return false;
    return true;
}

RingElem exact_divide_by_eta_power(const RingElem& a, int k) {
    if (!a.ctx()->base().is_exact())
        throw StructuralError(
            "division by eta is only performed where eta is a non-zero-divisor");
    TermMap t;
    for (const auto& [m, c] : a.terms()) {
        auto q = cyc_div_eta_pow(c, k);
        if (!q)
            throw ExactDivisionError("element is not exactly divisible by eta^" +
                                     std::to_string(k));
        t.emplace(m, std::move(*q));
    }
    return RingElem(a.ctx(), std::move(t), a.den());
}

// ---------------------------------------------------------------------------
// RingHom
// ---------------------------------------------------------------------------

namespace {

RingElem apply_terms_through(const RingCtx& /*src*/, const CtxPtr& dst, long twist,
                             const std::vector<RingElem>& var_images, const TermMap& t) {
    RingElem acc = dst->zero();
    for (const auto& [m, c] : t) {
        RingElem term = dst->constant(c.subst_rho_pow(twist));
        for (size_t v = 0; v < m.size(); ++v)
            if (m[v] > 0) term = term * var_images[v].pow(m[v]);
        acc = acc + term;
    }
    return acc;
}

}  // namespace

RingHom RingHom::make(CtxPtr src, CtxPtr dst, long twist, std::vector<RingElem> var_images,
                      bool check) {
    RingHom h;
    h.src_ = std::move(src);
    h.dst_ = std::move(dst);
    h.twist_ = twist;
    h.var_images_ = std::move(var_images);
    const int p = h.src_->prime().get();
    if (h.src_->prime() != h.dst_->prime()) throw StructuralError("hom across different p");
    if (((twist % p) + p) % p == 0 || std::gcd(((twist % p) + p) % p, (long)p) != 1)
        throw ArgumentError("coefficient twist must be prime to p");
    if (h.var_images_.size() != h.src_->nvars())
        throw StructuralError("hom needs one image per source variable");
    for (const auto& im : h.var_images_)
        if (im.ctx() != h.dst_) throw StructuralError("variable image in wrong ring");

    if (check) {
        // base ideal maps to zero
        for (const auto& g : h.src_->base().ideal_gens())
            if (!h.dst_->constant(g.subst_rho_pow(twist)).is_zero())
                throw StructuralError("base ideal does not map to zero");
        // power rules map to zero
        for (const auto& r : h.src_->rules()) {
            RingElem lhs = h.var_images_[r.var].pow(r.n);
            RingElem rhs =
                apply_terms_through(*h.src_, h.dst_, h.twist_, h.var_images_, r.rhs);
            if (!(lhs == rhs))
                throw StructuralError("relation " + h.src_->vars()[r.var] + "^" +
                                      std::to_string(r.n) + " does not map to zero");
        }
    }
    // denominators must become invertible; cache the inverses
    for (const auto& d : h.src_->denom_polys()) {
        RingElem img = apply_terms_through(*h.src_, h.dst_, h.twist_, h.var_images_, d);
        auto inv = try_invert(img);
        if (!inv)
            throw UnitRequiredError("denominator image is not invertible in the target");
        h.denom_inv_images_.push_back(std::move(*inv));
    }
    return h;
}

RingHom RingHom::canonical(CtxPtr src, CtxPtr dst, bool check) {
    std::vector<RingElem> images;
    for (const auto& name : src->vars()) images.push_back(dst->var(name));
    return make(std::move(src), std::move(dst), 1, std::move(images), check);
}

RingElem RingHom::apply(const RingElem& a) const {
    if (a.ctx() != src_) throw StructuralError("hom applied to element of another ring");
    RingElem img = apply_terms_through(*src_, dst_, twist_, var_images_, a.terms());
    for (size_t i = 0; i < a.den().size(); ++i)
        if (a.den()[i] > 0) img = img * denom_inv_images_[i].pow(a.den()[i]);
    return img;
}

RingElem RingHom::apply_iter(const RingElem& a, unsigned k) const {
    if (src_ != dst_) throw StructuralError("iterating a hom requires source = target");
    RingElem r = a;
    for (unsigned i = 0; i < k; ++i) r = apply(r);
    return r;
}

RingHom RingHom::compose_after(const RingHom& inner) const {
    if (inner.dst_ != src_) throw StructuralError("composition mismatch");
    std::vector<RingElem> images;
    for (const auto& im : inner.var_images_) images.push_back(apply(im));
    long tw = (twist_ * inner.twist_) % src_->prime().get();
    return make(inner.src_, dst_, tw, std::move(images), false);
}

RingElem apply_hom(const RingHom& h, const RingElem& a) { return h.apply(a); }

// ---------------------------------------------------------------------------
// flattened module view
// ---------------------------------------------------------------------------

namespace {
ModuleBasis module_basis_uncached(const CtxPtr& ctx);
}  // namespace

ModuleBasis module_basis(const CtxPtr& ctx) {
    static std::map<CtxPtr, ModuleBasis> cache;
    static std::mutex cache_mtx;
    std::lock_guard<std::mutex> lock(cache_mtx);
    auto it = cache.find(ctx);
    if (it == cache.end()) it = cache.emplace(ctx, module_basis_uncached(ctx)).first;
    return it->second;
}

namespace {
ModuleBasis module_basis_uncached(const CtxPtr& ctx) {
    for (size_t v = 0; v < ctx->nvars(); ++v)
        if (!ctx->rule_for(v))
            throw StructuralError("module basis needs every variable power-bounded");
    ModuleBasis mb;
    mb.ctx = ctx;
    mb.coeff_rank = ctx->prime().phi();
    // all monomials below the bounds, in lex order
    std::vector<Mono> monos;
    Mono cur(ctx->nvars(), 0);
    while (true) {
        monos.push_back(cur);
        size_t v = ctx->nvars();
        while (v > 0) {
            --v;
            if (cur[v] + 1 < ctx->rule_for(v)->n) {
                ++cur[v];
                std::fill(cur.begin() + v + 1, cur.end(), 0);
                break;
            }
            if (v == 0) {
                std::sort(monos.begin(), monos.end());
                mb.monos = std::move(monos);
                // zero lattice from the base ideal, blockwise
                ZMat rows;
                const ZMat& ideal = ctx->base().ideal_lattice();
                for (size_t mi = 0; mi < mb.monos.size(); ++mi)
                    for (const auto& ir : ideal) {
                        ZVec row(mb.dim(), mpz_class(0));
                        for (size_t k = 0; k < mb.coeff_rank; ++k)
                            row[mi * mb.coeff_rank + k] = ir[k];
                        rows.push_back(std::move(row));
                    }
                mb.zero_lattice = hnf(std::move(rows));
                return mb;
            }
        }
        if (ctx->nvars() == 0) {
            std::sort(monos.begin(), monos.end());
            mb.monos = std::move(monos);
            ZMat rows;
            for (const auto& ir : ctx->base().ideal_lattice())
                rows.push_back(ZVec(ir.begin(), ir.end()));
            mb.zero_lattice = hnf(std::move(rows));
            return mb;
        }
    }
}
}  // namespace

namespace {
size_t mono_slot(const ModuleBasis& mb, const Mono& m) {
    auto it = std::lower_bound(mb.monos.begin(), mb.monos.end(), m);
    if (it == mb.monos.end() || *it != m)
        throw StructuralError("monomial outside the module basis");
    return (size_t)(it - mb.monos.begin());
}
}  // namespace

ZVec flatten(const ModuleBasis& mb, const RingElem& a) {
    if (!a.is_polynomial())
        throw StructuralError("flatten needs a denominator-free element");
    ZVec v(mb.dim(), mpz_class(0));
    for (const auto& [m, c] : a.terms()) {
        size_t slot = mono_slot(mb, m);
        for (size_t k = 0; k < mb.coeff_rank; ++k) v[slot * mb.coeff_rank + k] = c.coeff(k);
    }
    return v;
}

RingElem unflatten(const ModuleBasis& mb, const ZVec& v) {
    TermMap t;
    PrimeP p = mb.ctx->prime();
    for (size_t mi = 0; mi < mb.monos.size(); ++mi) {
        std::vector<mpz_class> coeffs(mb.coeff_rank);
        bool nz = false;
        for (size_t k = 0; k < mb.coeff_rank; ++k) {
            coeffs[k] = v[mi * mb.coeff_rank + k];
            if (coeffs[k] != 0) nz = true;
        }
        if (nz) t.emplace(mb.monos[mi], CycInt(p, std::move(coeffs)));
    }
    return mb.ctx->from_terms(std::move(t));
}

ZMat hom_matrix(const ModuleBasis& mb, const RingHom& h) {
    ZMat rows;
    PrimeP p = mb.ctx->prime();
    for (size_t mi = 0; mi < mb.monos.size(); ++mi)
        for (size_t k = 0; k < mb.coeff_rank; ++k) {
            TermMap t;
            t.emplace(mb.monos[mi], CycInt::rho_pow(p, (long)k));
            RingElem e = mb.ctx->from_terms(std::move(t));
            rows.push_back(flatten(mb, h.apply(e)));
        }
    return rows;
}

CycInt reduce_mod(const CycInt& a, const mpz_class& m, int eta_power) {
    if (m == 0 && eta_power <= 0)
        throw ArgumentError("reduce_mod: zero modulus with zero eta power");
    return CoeffRing::quotient(a.prime(), m, eta_power).reduce(a);
}

ZMat mul_matrix(const ModuleBasis& mb, const RingElem& a) {
    ZMat rows;
    PrimeP p = mb.ctx->prime();
    for (size_t mi = 0; mi < mb.monos.size(); ++mi)
        for (size_t k = 0; k < mb.coeff_rank; ++k) {
            TermMap t;
            t.emplace(mb.monos[mi], CycInt::rho_pow(p, (long)k));
            RingElem e = mb.ctx->from_terms(std::move(t));
            rows.push_back(flatten(mb, e * a));
        }
    return rows;
}

}  // namespace etalift
