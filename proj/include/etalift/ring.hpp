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

#ifndef ETALIFT_RING_HPP
#define ETALIFT_RING_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "etalift/cyc.hpp"
#include "etalift/zlat.hpp"

namespace etalift {

/// Coefficient ring Z[rho]/(ideal). The ideal is an arbitrary finitely
/// generated one, canonicalized as an integer lattice in the power basis;
/// the menu actually used is (0), (m), (m, eta^k), (eta^k) and residue-field
/// presentations like (q, rho - r0). Elements reduce to a unique coset
/// representative.
class CoeffRing {
   public:
    explicit CoeffRing(PrimeP p);  // exact Z[rho]
    CoeffRing(PrimeP p, std::vector<CycInt> gens);

    /// Z[rho]/(m, eta^k); m = 0 or k = 0 omit the respective generator.
    static CoeffRing quotient(PrimeP p, const mpz_class& m, int eta_power);
    /// Residue field Z/q with rho |-> r0 (q prime, Phi_p(r0) = 0 mod q).
    static CoeffRing residue_field(PrimeP p, const mpz_class& q, const mpz_class& r0);

    PrimeP prime() const { return p_; }
    bool is_exact() const { return hnf_.empty(); }
    bool is_finite() const;
    mpz_class cardinality() const;  // finite case only

    CycInt reduce(CycInt a) const;
    bool ideal_contains(const CycInt& a) const;
    bool tau_stable(long s) const;

    const std::vector<CycInt>& ideal_gens() const { return gens_; }
    const ZMat& ideal_lattice() const { return hnf_; }

    bool operator==(const CoeffRing& o) const;

   private:
    PrimeP p_;
    std::vector<CycInt> gens_;
    ZMat hnf_;
};

using Mono = std::vector<uint32_t>;
using TermMap = std::map<Mono, CycInt>;

class RingElem;
class RingCtx;
using CtxPtr = std::shared_ptr<const RingCtx>;

/// Variable-power reduction rule v^n -> rhs, with deg_v(rhs) < n.
struct PowerRule {
    size_t var;
    uint32_t n;
    TermMap rhs;
};

/// A presented commutative Z[rho]-algebra: polynomial variables over a
/// CoeffRing, an optional power rule per variable, and declared invertible
/// denominators (localization). Denominators must have constant term 1 and
/// are only permitted over the exact base, where eta is a non-zero-divisor
/// and normal forms of fractions are unique.
class RingCtx : public std::enable_shared_from_this<RingCtx> {
   public:
    static CtxPtr make(CoeffRing base, std::vector<std::string> vars,
                       std::vector<PowerRule> rules = {},
                       std::vector<std::pair<std::string, TermMap>> denoms = {});

    const CoeffRing& base() const { return base_; }
    PrimeP prime() const { return base_.prime(); }
    const std::vector<std::string>& vars() const { return vars_; }
    size_t nvars() const { return vars_.size(); }
    size_t ndenoms() const { return denom_polys_.size(); }
    const std::vector<TermMap>& denom_polys() const { return denom_polys_; }
    const std::vector<std::string>& denom_names() const { return denom_names_; }

    size_t var_index(const std::string& name) const;
    const PowerRule* rule_for(size_t var) const;
    const std::vector<PowerRule>& rules() const { return rules_; }

    /// True when the ring is a finite set: finite base and every variable
    /// bounded by a power rule.
    bool is_finite_ring() const;
    mpz_class cardinality() const;

    // element factories
    RingElem zero() const;
    RingElem one() const;
    RingElem from_int(const mpz_class& n) const;
    RingElem constant(const CycInt& c) const;
    RingElem var(size_t i) const;
    RingElem var(const std::string& name) const;
    RingElem denom_inverse(size_t i) const;  // 1 / D_i
    RingElem from_terms(TermMap t) const;
    RingElem eta() const;  // image of rho - 1
    RingElem rho() const;

   private:
    RingCtx(CoeffRing base, std::vector<std::string> vars, std::vector<PowerRule> rules,
            std::vector<TermMap> denoms, std::vector<std::string> denom_names);

    CoeffRing base_;
    std::vector<std::string> vars_;
    std::vector<PowerRule> rules_;
    std::vector<TermMap> denom_polys_;
    std::vector<std::string> denom_names_;
    std::vector<int> rule_of_var_;  // -1 if none
};

/// An element in reduced normal form: a term map over the base (no monomial
/// reducible by any rule, coefficients canonical) divided by a monomial in
/// the declared denominators (each exponent minimal).
class RingElem {
   public:
    RingElem(CtxPtr ctx, TermMap num, std::vector<uint32_t> den);

    const CtxPtr& ctx() const { return ctx_; }
    const TermMap& terms() const { return num_; }
    const std::vector<uint32_t>& den() const { return den_; }

    bool is_zero() const { return num_.empty(); }
    bool is_polynomial() const;
    std::optional<CycInt> as_constant() const;  // polynomial of degree 0

    RingElem operator+(const RingElem& o) const;
    RingElem operator-(const RingElem& o) const;
    RingElem operator-() const;
    RingElem operator*(const RingElem& o) const;
    RingElem operator*(const CycInt& c) const;
    RingElem operator*(const mpz_class& n) const;
    RingElem pow(unsigned long e) const;

    bool operator==(const RingElem& o) const;
    bool operator!=(const RingElem& o) const { return !(*this == o); }

    std::string to_string() const;

   private:
    friend class RingCtx;
    CtxPtr ctx_;
    TermMap num_;
    std::vector<uint32_t> den_;
};

/// ring_add / ring_mul / ring_pow spelled as named functions.
inline RingElem ring_add(const RingElem& a, const RingElem& b) { return a + b; }
inline RingElem ring_mul(const RingElem& a, const RingElem& b) { return a * b; }
inline RingElem ring_pow(const RingElem& a, unsigned long e) { return a.pow(e); }

/// Unit inversion. nullopt means "provably not a unit". Throws
/// UndecidableError when the ring is infinite and the element is not a
/// Z[rho]-unit times declared denominators.
std::optional<RingElem> try_invert(const RingElem& a);
bool is_unit(const RingElem& a);

/// Exact division of polynomials over the exact base (leading-term algorithm,
/// coefficient division through cyc_solve). nullopt when not divisible.
std::optional<RingElem> exact_divide(const RingElem& a, const RingElem& b);

/// Divide by eta^k exactly, coefficientwise, over the exact base only.
/// Throws ExactDivisionError when a is not divisible.
RingElem exact_divide_by_eta_power(const RingElem& a, int k);
bool divisible_by_eta_power(const RingElem& a, int k);

/// Z[rho]-algebra homomorphism: an optional coefficient twist rho -> rho^s
/// followed by variable substitution. Relations of the source are checked to
/// map to zero at construction, and denominator images are inverted once and
/// cached.
class RingHom {
   public:
    static RingHom make(CtxPtr src, CtxPtr dst, long twist, std::vector<RingElem> var_images,
                        bool check = true);
    /// Identity-shaped map matching variables by name (inclusion/reduction).
    static RingHom canonical(CtxPtr src, CtxPtr dst, bool check = true);

    const CtxPtr& source() const { return src_; }
    const CtxPtr& target() const { return dst_; }
    long twist() const { return twist_; }
    const std::vector<RingElem>& var_images() const { return var_images_; }

    RingElem apply(const RingElem& a) const;
    RingElem operator()(const RingElem& a) const { return apply(a); }
    RingElem apply_iter(const RingElem& a, unsigned k) const;

    RingHom compose_after(const RingHom& inner) const;  // this  o  inner

   private:
    RingHom() = default;
    CtxPtr src_, dst_;
    long twist_ = 1;
    std::vector<RingElem> var_images_;
    std::vector<RingElem> denom_inv_images_;
};

RingElem apply_hom(const RingHom& h, const RingElem& a);

/// Flattened Z-module view of a finite (or rule-bounded) ring, used for
/// exact fixed-ring, kernel and span computations.
struct ModuleBasis {
    CtxPtr ctx;
    std::vector<Mono> monos;
    size_t coeff_rank;  // p - 1
    ZMat zero_lattice;  // HNF; empty over the exact base
    size_t dim() const { return monos.size() * coeff_rank; }
};

ModuleBasis module_basis(const CtxPtr& ctx);
ZVec flatten(const ModuleBasis& mb, const RingElem& a);
RingElem unflatten(const ModuleBasis& mb, const ZVec& v);
/// Row i = coordinates of h(basis unit i); so row-vector x maps to x*A.
ZMat hom_matrix(const ModuleBasis& mb, const RingHom& h);
/// Row per basis unit i: coordinates of (a * basis unit i).
ZMat mul_matrix(const ModuleBasis& mb, const RingElem& a);

// monomial helpers
Mono mono_mul(const Mono& a, const Mono& b);
bool mono_divides(const Mono& d, const Mono& m);
TermMap resize_terms(const TermMap& t, size_t new_nvars);

/// Canonical image of a cyclotomic integer in Z[rho]/(m, eta^k).
/// Both moduli zero is an argument error (no reduction requested).
CycInt reduce_mod(const CycInt& a, const mpz_class& m, int eta_power);

}  // namespace etalift

#endif
