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

#ifndef ETALIFT_ETA_OPS_HPP
#define ETALIFT_ETA_OPS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "etalift/ring.hpp"

namespace etalift {

/// The eta-adic operation calculus over one ring: phi(x) = 1 + x*eta,
/// x (+) y with phi(x (+) y) = phi(x)phi(y), the eta^p versions, the
/// iterates s*, s*_p, and pr#_p.
///
/// pr#_p is never computed by in-ring division: the quotient
/// ((1+Z eta)^{pr} - 1)/eta^p is expanded once in Z[rho][Z], where eta is a
/// non-zero-divisor, and then specialized. That keeps the operation well
/// defined when eta is a zero divisor in the target.
class EtaOps {
   public:
    explicit EtaOps(CtxPtr ctx);

    const CtxPtr& ctx() const { return ctx_; }
    const RingElem& eta() const { return eta_; }
    const RingElem& eta_pm1() const { return eta_pm1_; }
    const RingElem& eta_p() const { return eta_p_; }

    RingElem phi(const RingElem& x) const { return one_ + x * eta_; }
    RingElem phi_p(const RingElem& x) const { return one_ + x * eta_p_; }

    RingElem oplus(const RingElem& x, const RingElem& y) const;
    /// Unique z with x = y (+) z; requires 1 + y*eta invertible.
    RingElem ominus(const RingElem& x, const RingElem& y) const;
    RingElem star(long s, const RingElem& a) const;

    RingElem oplus_p(const RingElem& x, const RingElem& y) const;
    RingElem ominus_p(const RingElem& x, const RingElem& y) const;
    RingElem star_p(long r, const RingElem& z) const;

    RingElem sharp_p(long pr, const RingElem& z) const;

    /// delta_s * tau(x) and delta_s^p * tau(x); the twist s is read off tau.
    RingElem delta_tau(const RingHom& tau, const RingElem& x) const;
    RingElem delta_p_tau(const RingHom& tau, const RingElem& x) const;

    /// Coefficients (index k >= 1) of the generic polynomial
    /// pr#_p Z = ((1+Z eta)^{pr} - 1)/eta^p in Z[rho][Z]; cached per (p, pr).
    static std::vector<CycInt> sharp_poly(PrimeP p, long pr);

   private:
    CtxPtr ctx_;
    RingElem one_, eta_, eta_pm1_, eta_p_;
};

/// One identity outcome in one ring of the identity suite.
struct IdentityResult {
    int index = 0;
    std::string formula;
    std::string ring;
    std::string status;  // "pass" | "fail" | "skipped"
    int samples = 0;
    std::string counterexample;  // empty unless fail
};

struct SuiteReport {
    int p = 0;
    uint64_t seed = 0;
    int samples = 0;
    std::vector<IdentityResult> results;
    bool all_pass() const;  // no "fail" entries
};

/// Runs all 18 operation identities: symbolically in Z[rho][x,y] (identity (8)
/// in Z[rho][a,b](1/(1+b eta))), then at the registered finite
/// specializations Z[rho]/(p^2), F_p and Z[rho]/(q) with seeded sampling.
SuiteReport identity_suite(PrimeP p, int samples, uint64_t seed);

/// Same identities evaluated on a caller-supplied ring (no tau there unless
/// the ring's ideal is tau-stable).
SuiteReport identity_suite_on(const CtxPtr& ctx, const std::string& label,
                                       PrimeP p, int samples, uint64_t seed);

/// Smallest prime q != p with q = 1 (mod p).
int smallest_split_prime(int p);

/// Seeded random element with all variable exponents below `max_deg` and
/// coefficients in [-bound, bound] (quotient bases reduce them).
RingElem sample_element(const CtxPtr& ctx, std::mt19937_64& rng, int max_deg, long bound);

}  // namespace etalift

#endif
