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

#ifndef ETALIFT_GALOIS_HPP
#define ETALIFT_GALOIS_HPP

#include <string>
#include <utility>
#include <vector>

#include "etalift/eta_ops.hpp"
#include "etalift/ring.hpp"

namespace etalift {

/// The generalized Artin-Schreier polynomial Z^p + g(Z) - u, with
/// g_i = x * b_i * eta^{i-1}. Construction verifies, exactly in Z[rho][Z,u]:
///   eta^p (Z^p + g(Z) - u) = (1 + eta Z)^p - (1 + u eta^p)
///   (1 + z eta)^p = 1 + (g(z) + z^p) eta^p
///   g = -Z modulo eta
struct GenASPoly {
    PrimeP p;
    std::vector<CycInt> g;  // g[i] is the coefficient of Z^i, 1 <= i <= p-1

    static const GenASPoly& get(PrimeP p);  // cached, verified on first build
    RingElem eval(const RingElem& z) const;
};

struct GaloisCert {
    bool separable = false;
    bool sigma_order_p = false;
    bool sigma_shift = false;  // sigma^i(theta) = rho^i theta + delta_i
    bool factorization = false;
    bool unit_differences = false;
    bool fixed_ring = false;
    bool discriminant_unit = false;
    bool kummer_alpha = false;  // (1 + eta theta)^p = 1 + a eta^p
    std::string discriminant_form;
    std::string separability_witness;
    bool all() const {
        return separable && sigma_order_p && sigma_shift && factorization &&
               unit_differences && fixed_ring && discriminant_unit && kummer_alpha;
    }
};

/// S = R[Z]/(Z^p + g(Z) - a) with sigma(theta) = rho theta + 1, plus the
/// verification certificate from the separability criterion.
class GaloisExt {
   public:
    static GaloisExt build(CtxPtr base, const RingElem& a);

    const CtxPtr& base_ctx() const { return base_; }
    const CtxPtr& ext_ctx() const { return ext_; }
    const RingElem& param() const { return a_; }
    const RingHom& sigma() const { return sigma_; }
    const GaloisCert& cert() const { return cert_; }
    size_t theta_var() const { return theta_var_; }
    RingElem theta() const { return ext_->var(theta_var_); }
    RingHom inclusion() const;  // base -> ext

   private:
    GaloisExt(CtxPtr base, CtxPtr ext, RingElem a, RingHom sigma, size_t theta_var)
        : base_(std::move(base)),
          ext_(std::move(ext)),
          a_(std::move(a)),
          sigma_(std::move(sigma)),
          theta_var_(theta_var) {}

    CtxPtr base_, ext_;
    RingElem a_;
    RingHom sigma_;
    size_t theta_var_;
    GaloisCert cert_;
};

/// Separability criterion: separable iff 1 + a eta^p invertible. Returns the verdict and a
/// witness (the inverse, or a note). Undecidable unit status propagates.
std::pair<bool, std::string> is_separable_param(const CtxPtr& ctx, const RingElem& a);

/// Solves sigma(v) = v and reports whether the solution space is exactly the
/// base: integer-lattice kernel for finite rings, an exact determinant
/// argument over domains.
bool fixed_ring_check(const CtxPtr& ext, const RingHom& sigma, size_t theta_var);

struct ThetaShift {
    RingElem new_a;
    GaloisExt shifted;
    bool iso_ok = false;
};
/// Parameter shift: theta' = theta (+) z with a' = a (+)_p (g(z) + z^p); verifies the
/// extension isomorphism both ways. Requires 1 + z eta invertible.
ThetaShift shift_theta(const GaloisExt& e, const RingElem& z);

struct NormalBasisTheta {
    RingElem theta;  // element of S with sigma(theta) = rho theta + 1
    RingElem a;      // recovered parameter (-1)^{p-1} prod sigma^i(theta)
    std::vector<CycInt> r_seq;
    bool normalized = false;   // sum sigma^i(z) = 1 after scaling
    bool wrap_ok = false;      // r_{p-1} = rho r_0 + 1
    bool sigma_relation = false;
    bool poly_root = false;    // theta^p + g(theta) = a
    bool powers_span = false;  // 1, theta, ..., theta^{p-1} span S over base
    bool alpha_twist = false;  // sigma(alpha) = rho alpha for the Kummer sum
    bool ok() const {
        return normalized && wrap_ok && sigma_relation && poly_root && powers_span &&
               alpha_twist;
    }
};
/// From a normal basis element z of a finite C_p
/// extension (sigma of order p on S), produce theta with the standard action.
NormalBasisTheta normal_basis_to_theta(const CtxPtr& S, const RingHom& sigma,
                                       const RingElem& z);

struct ExtLift {
    GaloisExt lifted;
    RingElem a_preimage;
    bool reduction_ok = false;
};
/// Lift a C_p extension along a surjection h: R' -> R'' whose
/// 1 + eta^p R'' preimages are units. The parameter preimage is the
/// canonical-coordinate lift (deterministic).
ExtLift lift_extension(const RingHom& h, const GaloisExt& target);

/// Canonical-coordinate preimage of an element under a reduction-shaped hom
/// (twist 1, variables to variables).
RingElem canonical_preimage(const RingHom& h, const RingElem& b);

}  // namespace etalift

#endif
