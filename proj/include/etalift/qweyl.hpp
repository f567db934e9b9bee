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

#ifndef ETALIFT_QWEYL_HPP
#define ETALIFT_QWEYL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "etalift/linalg.hpp"
#include "etalift/ring.hpp"

namespace etalift {

/// An element of B = Z[rho]<x,y>/(xy - rho yx - 1) in normal form: the basis
/// is y^i x^j with coefficients on the left. The single rewrite
/// x y -> rho y x + 1 terminates (each application removes an inversion) and
/// the normal form is unique.
class QWeylElem {
   public:
    using Key = std::pair<uint32_t, uint32_t>;  // (i, j) for y^i x^j

    explicit QWeylElem(PrimeP p) : p_(p) {}
    QWeylElem(PrimeP p, std::map<Key, CycInt> terms);

    static QWeylElem one(PrimeP p);
    static QWeylElem gen_x(PrimeP p);
    static QWeylElem gen_y(PrimeP p);
    static QWeylElem monomial(PrimeP p, uint32_t i, uint32_t j, const CycInt& c);

    PrimeP prime() const { return p_; }
    const std::map<Key, CycInt>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    QWeylElem operator+(const QWeylElem& o) const;
    QWeylElem operator-(const QWeylElem& o) const;
    QWeylElem operator*(const QWeylElem& o) const;
    QWeylElem operator*(const CycInt& c) const;
    bool operator==(const QWeylElem& o) const;
    bool operator!=(const QWeylElem& o) const { return !(*this == o); }

    std::string to_string() const;

   private:
    PrimeP p_;
    std::map<Key, CycInt> terms_;
};

/// Normal form of a word in {x, y}, e.g. "xyxy".
QWeylElem qweyl_word(PrimeP p, const std::string& word);

/// Centrality and independence report for x^p and y^p.
struct CenterReport {
    bool xp_central = false;
    bool yp_central = false;
    bool monomials_independent = false;  // y^i x^j independent over C up to a bound
    bool commutation_closed_form = false;  // x^i y = rho^i y x^i + delta_i x^{i-1}
    bool all() const {
        return xp_central && yp_central && monomials_independent && commutation_closed_form;
    }
};
CenterReport verify_center(PrimeP p);

/// B as a free module over a coefficient ring carrying the central values
/// s = x^p and t = y^p: elements are maps (i,j) in [0,p)^2 -> coefficients,
/// with exponent overflow folded into s and t.
class QWeylBounded {
   public:
    QWeylBounded(PrimeP p, CtxPtr coeff, RingElem s_val, RingElem t_val);

    using Key = std::pair<uint32_t, uint32_t>;
    using Elem = std::map<Key, RingElem>;

    PrimeP prime() const { return p_; }
    const CtxPtr& coeff_ctx() const { return coeff_; }

    Elem zero() const { return {}; }
    Elem unit(const RingElem& c) const;
    Elem basis(uint32_t i, uint32_t j, const RingElem& c) const;
    Elem add(const Elem& a, const Elem& b) const;
    Elem mul(const Elem& a, const Elem& b) const;
    bool eq(const Elem& a, const Elem& b) const;

    /// Matrix of psi: B (x)_C B^op -> End_C(B), psi(a (x) b)(z) = a z b, on
    /// the basis y^i x^j; rows indexed by the output basis element, columns
    /// by (a-index, b-index) pairs.
    ElemMat psi_matrix() const;

   private:
    PrimeP p_;
    CtxPtr coeff_;
    RingElem s_, t_;
};

/// det(psi) over the symbolic center C = Z[rho][s,t] by fraction-free
/// elimination (p = 2; larger p exceeds the size cap, use evaluated mode).
///
/// The hypersurface is pinned including its sign: the computation factors
/// the determinant against 1 + s t eta^p and against the coordinate-flipped
/// 1 + rho^{p(p-1)/2} s t eta^p (equal for odd p; at p = 2 the exact result
/// is a power of 1 - 4st, the image of 1 + 4st under t -> -t). The matching
/// form is recorded.
struct AzumayaSymbolic {
    RingElem det;            // element of Z[rho][s,t]
    int power = 0;           // det = unit * pi^power for the recorded pi
    CycInt unit;             // the Z[rho] unit in front
    bool factored = false;   // the factorization succeeded
    std::string pi_form;     // which hypersurface form matched
    bool twisted = false;    // matched the rho-twisted form (p = 2 sign)
    bool mod_p_unit = false; // (det, p) = C: det mod p is a unit
};
AzumayaSymbolic azumaya_det_symbolic(PrimeP p);

/// Pointwise Azumaya locus over a residue field F_q with a chosen rho-image:
/// at every point (s0, t0), det(psi) is a unit iff the recorded hypersurface
/// form is nonzero there. For odd p the plain and twisted forms coincide.
struct AzumayaPointSweep {
    int q = 0;
    mpz_class rho_image;
    int points_checked = 0;
    int azumaya_points = 0;
    bool locus_matches = false;       // against the recorded pi form
    bool matches_plain = false;       // det unit <=> 1 + s t eta^p != 0
    bool matches_twisted = false;     // det unit <=> 1 + rho^{p(p-1)/2} s t eta^p != 0
    bool nilpotent_witness = false;   // 1 + eta x y nilpotent ideal at a singular point
    std::string pi_form;
    std::string failure;
};
AzumayaPointSweep azumaya_point_sweep(PrimeP p, int q, const mpz_class& rho_image);

/// One point of the sweep, for caller-supplied point lists.
struct AzumayaPoint {
    bool det_unit = false;
    bool pi_plain = false;
    bool pi_twisted = false;
};
AzumayaPoint azumaya_point(PrimeP p, int q, const mpz_class& rho_image, int s0, int t0);

/// Smallest rho-image in [0, q) satisfying the cyclotomic relation mod q.
mpz_class default_rho_image(PrimeP p, int q);

/// The cyclic-algebra specialization: A = Delta(L/K, sigma, b)
/// generated by beta and gamma = alpha beta^{-1} with beta gamma =
/// rho gamma beta + 1, beta^p = b, gamma^p = u/b. Since the commutation rule
/// matches the B-relation, A is the bounded model with s = b, t = u/b and
/// phi(x) = beta, phi(y) = gamma; the certificate verifies the relation and
/// the central images. Requires b invertible.
struct CyclicSpecialization {
    bool relation = false;   // beta gamma - rho gamma beta = 1
    bool xp_image = false;   // phi(x^p) = b
    bool yp_image = false;   // phi(y^p) = u/b
    bool all() const { return relation && xp_image && yp_image; }
};
CyclicSpecialization specialize_cyclic(PrimeP p, const RingElem& u, const RingElem& b);

/// [c,b] over a ring with pR = 0 is Azumaya (psi invertible).
struct DiffCrossedCert {
    bool azumaya = false;
    std::string method;  // "field-det" | "residue-det" | "lift-det"
};
DiffCrossedCert diff_crossed_product_check(const CtxPtr& ctx, const RingElem& c,
                                           const RingElem& b);

/// Brauer lifting demo: lift a differential crossed product [c'', b''] over R/I to
/// an Azumaya algebra over R (B with s, t evaluated at canonical lifts).
struct BrauerLiftCert {
    bool hypothesis_units = false;  // 1 + pR consists of units
    bool lift_azumaya = false;
    bool reduction_matches = false;
    bool all() const { return hypothesis_units && lift_azumaya && reduction_matches; }
};
BrauerLiftCert brauer_lift_demo(const CtxPtr& R, const RingHom& reduction,
                                const RingElem& c_dn, const RingElem& b_dn);

}  // namespace etalift

#endif
