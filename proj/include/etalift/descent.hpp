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

#ifndef ETALIFT_DESCENT_HPP
#define ETALIFT_DESCENT_HPP

#include <string>
#include <vector>

#include "etalift/galois.hpp"

namespace etalift {

/// The auxiliary automorphism data: tau(rho) = rho^s with s a primitive root
/// and r = (s^{p-1} - 1)/p prime to p. Deterministic smallest choice.
/// p = 2 is the degenerate branch (tau of order 1).
struct SChoice {
    int p = 0;
    long s = 1;
    mpz_class r = 0;

    static SChoice choose(PrimeP p);
    bool degenerate() const { return p == 2; }
    long r_long() const;
};

/// Z[rho] (x)_Z R' for R' = Z/m (optionally with bounded variables): the
/// coefficient base becomes Z[rho]/(m) and tau acts by the coefficient twist.
/// The adjunction invariants (tau of order p-1, fixed ring R') are verified exactly
/// for finite rings.
struct TauRing {
    CtxPtr ctx;
    long s = 1;
    bool tau_order_ok = false;
    bool fixed_ring_ok = false;
    bool rho_order_ok = false;

    RingHom tau() const;
};

TauRing adjoin_rho(PrimeP p, const mpz_class& m, std::vector<std::string> vars = {},
                   std::vector<PowerRule> rules = {});

/// N(z) = (s^{p-2} *_p z) (+)_p (s^{p-3} *_p d^pt(z)) (+)_p ... (+)_p (d^pt)^{p-2}(z)
RingElem norm_N(const EtaOps& ops, const RingHom& tau, const SChoice& ch, const RingElem& z);

/// N'(z) = (s^{p-2} * z) (+) (s^{p-3} * dt(z)) (+) ... (+) (dt)^{p-2}(z)
RingElem norm_Nprime(const EtaOps& ops, const RingHom& tau, const SChoice& ch,
                     const RingElem& z);

struct DescentCert {
    bool separable_norm = false;   // 1 + N(z) eta^p invertible
    bool tau_well_defined = false; // theta relation respected
    bool tau_order = false;        // tau^{p-1} = 1 on theta
    bool commute = false;          // sigma tau = tau sigma
    bool norm_recursion = false;   // d^pt(N(z)) = s *_p N(z) (-)_p (pr *_p z)
    bool kummer_twist = false;     // tau(alpha) (1 + z eta^p) = alpha^s
    bool eps_tau_fixed = false;
    bool eps_shift_mod_eta = false;  // sigma(eps) = eps - 1 mod eta
    bool base_galois = false;        // the with-rho certificate on S/R
};

/// The generic twisted extension: R = Z[rho][x_0..x_{p-2}](1/C) with
/// C = N_tau(1 + z eta^p), z = sum x_i rho^i, u = N(z), S = R[theta], and
/// tau(theta) = (1/delta)((s * theta) (-) (r *_p z) eta^{p-1}).
struct GenericDescent {
    SChoice ch;
    CtxPtr R;
    RingElem z, u;
    GaloisExt ext;
    RingHom tauR, tauS;
    std::optional<RingElem> eps;  // computed under the symbolic contract (p = 3)
    DescentCert cert;
    bool fully_verified = false;  // symbolic checks ran (contract: p = 3)
};

GenericDescent build_generic_descent(PrimeP p);

/// Direct construction of the twisted extension at a finite specialization
/// x_i -> values; all certificate checks run exactly in the finite ring.
struct SpecializedDescent {
    SChoice ch;
    CtxPtr R1;
    RingElem z, u;
    GaloisExt ext;
    RingHom tauS;
    RingElem eps;
    DescentCert cert;
    bool eps_spans = false;  // unit determinant of the eps power basis
};

SpecializedDescent specialize_descent(PrimeP p, CoeffRing base,
                                      const std::vector<CycInt>& x_values);

/// Verifies that the generic construction maps onto a specialization:
/// x_i -> values, theta -> theta, compatibly with sigma and tau.
bool verify_specialization_hom(const GenericDescent& g, const SpecializedDescent& s);

/// At a finite extension: every sigma-fixed element of 1 + S eta is
/// 1 + r eta with r in the base.
bool sigma_fixed_units_check(const GaloisExt& e);

/// eps = theta + tau(theta) + ... + tau^{p-2}(theta), the tau-fixed
/// tau-fixed Artin-Schreier element.
RingElem epsilon_element(const RingHom& tauS, const RingElem& theta);

/// One step of the z-improvement pipeline.
struct ChainStep {
    std::string name;
    bool ok = false;
    std::string note;
};

/// The descent normal form extracted from a finite C_p x <tau> extension:
/// theta with sigma(theta) = rho theta + 1,
/// dt(theta) = (s*theta) (-) (r *_p z) eta^{p-1}, and p #_p theta = N(z).
struct DescentDatum {
    RingElem theta, z, u;
    std::vector<ChainStep> steps;
    bool ok() const {
        for (const auto& s : steps)
            if (!s.ok) return false;
        return !steps.empty();
    }
};

DescentDatum improve_to_normal_form(const CtxPtr& S, const RingHom& sigma,
                                    const RingHom& tau, const SChoice& ch,
                                    const RingElem& theta0);

/// The rho-free lift for R' = Z/m_src ->> R'' = Z/m_dst
/// and S'' the classical Artin-Schreier extension with parameter a_dst.
/// The tau-fixed subring S' of the lifted extension is certified
/// C_p Galois over Z/m_src and shown to reduce onto S''.
struct RhoFreeLift {
    SChoice ch;
    DescentDatum datum;              // downstairs normal form
    std::optional<GaloisExt> ext_up;  // twisted extension over Z[rho]/(m_src)
    std::optional<RingElem> z_up, u_up;
    std::vector<ChainStep> checks;
    bool ok() const {
        if (!datum.ok()) return false;
        for (const auto& c : checks)
            if (!c.ok) return false;
        return !checks.empty() && ext_up.has_value();
    }
};

RhoFreeLift lift_without_rho(PrimeP p, const mpz_class& m_src, const mpz_class& m_dst,
                             const mpz_class& a_dst);

/// Deterministic normal-basis search in a finite C_p extension.
RingElem find_normal_basis_element(const CtxPtr& S, const RingHom& sigma);

/// Enumerate the canonical representatives of a finite coefficient ring.
std::vector<CycInt> enumerate_coeff_ring(const CoeffRing& base, size_t cap = 200000);

/// Eigen-analysis of the F_p[<dt>] action on B*/B*_p at a finite
/// specialization (p = 3 scale): finds eigenvectors v with
/// dt(v) = a * v mod B*_p and evaluates N' on them.
struct EigenNormReport {
    struct Entry {
        long a = 0;
        bool found = false;
        bool nprime_vanishes = false;  // class of N'(v) in B*/B*_p trivial
        std::string witness;
    };
    std::vector<Entry> entries;
    bool consistent = false;  // N' vanishes exactly off the a = s eigenspace
};

EigenNormReport eigen_norm_analysis(const SpecializedDescent& sd);

}  // namespace etalift

#endif
