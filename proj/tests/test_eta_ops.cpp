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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "etalift/eta_ops.hpp"

using namespace etalift;

TEST_CASE("oplus basics") {
    for (int pv : {2, 3, 5, 7}) {
        PrimeP p(pv);
        auto G = RingCtx::make(CoeffRing(p), {"x", "y"});
        EtaOps ops(G);
        RingElem x = G->var("x"), y = G->var("y");
        CHECK(ops.oplus(G->zero(), y) == y);
        // 1 (+) t = 1 + rho*t
        CHECK(ops.oplus(G->one(), x) == G->one() + G->rho() * x);
        // phi is a monoid map: 1 + (x(+)y)eta = (1+x eta)(1+y eta) identically
        CHECK(ops.phi(ops.oplus(x, y)) == ops.phi(x) * ops.phi(y));
        // commutative/associative symbolically
        CHECK(ops.oplus(x, y) == ops.oplus(y, x));
    }
}

TEST_CASE("characteristic p collapse: eta -> 0") {
    for (int pv : {2, 3, 5}) {
        PrimeP p(pv);
        auto Fp = RingCtx::make(CoeffRing::quotient(p, 0, 1), {});
        EtaOps ops(Fp);
        std::mt19937_64 rng(1);
        for (int t = 0; t < 30; ++t) {
            RingElem a = sample_element(Fp, rng, 0, 50);
            RingElem b = sample_element(Fp, rng, 0, 50);
            CHECK(ops.oplus(a, b) == a + b);
            CHECK(ops.ominus(a, b) == a - b);
            CHECK(ops.oplus_p(a, b) == a + b);
        }
    }
}

TEST_CASE("ominus is the inverse of oplus") {
    PrimeP p(3);
    auto Z9 = RingCtx::make(CoeffRing::quotient(p, 9, 0), {});
    EtaOps ops(Z9);
    std::mt19937_64 rng(2);
    int done = 0;
    while (done < 50) {
        RingElem y = sample_element(Z9, rng, 0, 8);
        RingElem z = sample_element(Z9, rng, 0, 8);
        if (!try_invert(ops.phi(y)).has_value()) continue;
        CHECK(ops.ominus(ops.oplus(y, z), y) == z);
        CHECK(ops.ominus(z, z) == Z9->zero());
        ++done;
    }
    // unit-required error surfaces
    auto G = RingCtx::make(CoeffRing(p), {"x", "y"});
    EtaOps gops(G);
    CHECK_THROWS_AS(gops.ominus(G->var(0), G->var(1)), UnitRequiredError);
}

TEST_CASE("star iterates and s*1 = delta_s") {
    for (int pv : {2, 3, 5}) {
        PrimeP p(pv);
        auto G = RingCtx::make(CoeffRing(p), {"a"});
        EtaOps ops(G);
        RingElem a = G->var(0);
        CHECK(ops.star(1, a) == a);
        CHECK(ops.star(0, a).is_zero());
        for (long s = 0; s <= 2 * pv + 1; ++s)
            CHECK(ops.star(s, G->one()) == G->constant(CycInt::delta(p, s)));
        // phi(a)^s = phi(s*a)
        for (long s : {2L, 3L, 5L})
            CHECK(ops.phi(a).pow(s) == ops.phi(ops.star(s, a)));
        CHECK_THROWS_AS(ops.star(-1, a), ArgumentError);
    }
}

TEST_CASE("oplus monoid laws on random triples") {
    PrimeP p(3);
    auto Z9 = RingCtx::make(CoeffRing::quotient(p, 9, 0), {});
    auto F7 = RingCtx::make(CoeffRing::quotient(p, 7, 0), {});
    std::mt19937_64 rng(3);
    for (const auto& ctx : {Z9, F7}) {
        EtaOps ops(ctx);
        for (int t = 0; t < 200; ++t) {
            RingElem a = sample_element(ctx, rng, 0, 50);
            RingElem b = sample_element(ctx, rng, 0, 50);
            RingElem c = sample_element(ctx, rng, 0, 50);
            CHECK(ops.oplus(a, ops.oplus(b, c)) == ops.oplus(ops.oplus(a, b), c));
            CHECK(ops.oplus(a, b) == ops.oplus(b, a));
            CHECK(ops.oplus(a, ctx->zero()) == a);
        }
    }
}

TEST_CASE("t *_p m = t m when pm = 0 and eta^{p-1} m = 0") {
    PrimeP p(3);
    auto Z9 = RingCtx::make(CoeffRing::quotient(p, 9, 0), {});
    EtaOps ops(Z9);
    std::mt19937_64 rng(4);
    for (int t = 0; t < 30; ++t) {
        RingElem m = sample_element(Z9, rng, 0, 8) * mpz_class(3);
        REQUIRE((m * mpz_class(3)).is_zero());
        REQUIRE((m * ops.eta_pm1()).is_zero());
        for (long k = 0; k <= 7; ++k) CHECK(ops.star_p(k, m) == m * mpz_class(k));
    }
}

TEST_CASE("sharp_p generic polynomial against the binomial closed form") {
    // independent oracle: pr#_p Z has coefficient binom(pr,k)/p * x * eta^{k-1}
    // for k < p and binom(pr,k) eta^{k-p} for k >= p
    for (int pv : {2, 3, 5}) {
        PrimeP p(pv);
        EtaData d = EtaData::compute(p);
        for (long r : {1L, 2L, 3L}) {
            long pr = pv * r;
            auto coeffs = EtaOps::sharp_poly(p, pr);
            REQUIRE((long)coeffs.size() == pr + 1);
            for (long k = 1; k <= pr; ++k) {
                mpz_class bin = binomial(pr, k);
                CycInt expect(p);
                if (k < pv) {
                    REQUIRE(bin % pv == 0);
                    expect = d.x_unit * CycInt::eta(p).pow(k - 1) * mpz_class(bin / pv);
                } else {
                    expect = CycInt::eta(p).pow(k - pv) * bin;
                }
                CHECK(coeffs[k] == expect);
            }
        }
    }
}

TEST_CASE("sharp_p specializes where eta is a zero divisor") {
    PrimeP p(3);
    auto G = RingCtx::make(CoeffRing(p), {"z"});
    EtaOps gops(G);
    RingElem z = G->var(0);
    CHECK(gops.sharp_p(3, G->zero()).is_zero());
    // (p #_p z) eta^{p-1} = p * z symbolically
    CHECK(gops.sharp_p(3, z) * gops.eta_pm1() == gops.star(3, z));
    // identity (1+z eta)^p = 1 + (p#_p z) eta^p symbolically
    CHECK(gops.phi(z).pow(3) == gops.phi_p(gops.sharp_p(3, z)));
    CHECK_THROWS_AS(gops.sharp_p(4, z), ArgumentError);
    CHECK_THROWS_AS(gops.sharp_p(0, z), ArgumentError);
    // in Z[rho]/(9) the same identity holds by specialization
    auto Z9 = RingCtx::make(CoeffRing::quotient(p, 9, 0), {});
    EtaOps ops(Z9);
    std::mt19937_64 rng(5);
    for (int t = 0; t < 40; ++t) {
        RingElem a = sample_element(Z9, rng, 0, 8);
        CHECK(ops.phi(a).pow(3) == ops.phi_p(ops.sharp_p(3, a)));
    }
}

TEST_CASE("delta tau twisted operators") {
    PrimeP p(3);
    auto G = RingCtx::make(CoeffRing(p), {"x", "y"});
    EtaOps ops(G);
    RingHom tau = RingHom::make(G, G, 2, {G->var(0), G->var(1)});
    RingElem x = G->var(0), y = G->var(1);
    CHECK(ops.delta_tau(tau, G->zero()).is_zero());
    // (delta tau)^{p-1} = 1
    RingElem w = x + G->rho() * y * y;
    RingElem it = w;
    for (int i = 0; i < 2; ++i) it = ops.delta_tau(tau, it);
    CHECK(it == w);
    // tau(phi(z)) = phi(delta tau(z)) and the eta^p analogue
    CHECK(tau.apply(ops.phi(w)) == ops.phi(ops.delta_tau(tau, w)));
    CHECK(tau.apply(ops.phi_p(w)) == ops.phi_p(ops.delta_p_tau(tau, w)));
    CHECK(ops.delta_tau(tau, ops.oplus(x, y)) ==
          ops.oplus(ops.delta_tau(tau, x), ops.delta_tau(tau, y)));
}

TEST_CASE("identity suite passes for p = 2 and 3") {
    for (int pv : {2, 3}) {
        SuiteReport rep = identity_suite(PrimeP(pv), 12, 7);
        for (const auto& r : rep.results) {
            INFO("identity ", r.index, " on ", r.ring, ": ", r.counterexample);
            CHECK(r.status != "fail");
        }
        CHECK(rep.all_pass());
        // 18 identities on the symbolic layer + 3 specializations
        CHECK(rep.results.size() == 18 * 4);
    }
}

TEST_CASE("suite is deterministic for a fixed seed") {
    SuiteReport a = identity_suite(PrimeP(3), 6, 99);
    SuiteReport b = identity_suite(PrimeP(3), 6, 99);
    REQUIRE(a.results.size() == b.results.size());
    for (size_t i = 0; i < a.results.size(); ++i) {
        CHECK(a.results[i].status == b.results[i].status);
        CHECK(a.results[i].samples == b.results[i].samples);
    }
}
