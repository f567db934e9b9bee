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

#include "etalift/descent.hpp"

using namespace etalift;

TEST_CASE("choice of s") {
    SChoice c3 = SChoice::choose(PrimeP(3));
    CHECK(c3.s == 2);
    CHECK(c3.r == 1);
    SChoice c5 = SChoice::choose(PrimeP(5));
    CHECK(c5.s == 2);
    CHECK(c5.r == 3);
    SChoice c7 = SChoice::choose(PrimeP(7));
    CHECK(c7.s == 3);
    CHECK(c7.r == 104);
    CHECK(c7.r % 7 != 0);
    SChoice c2 = SChoice::choose(PrimeP(2));
    CHECK(c2.degenerate());
}

TEST_CASE("adjoining rho to Z/m") {
    // R' = F_3 at p = 3: rho has order p, tau order p-1, fixed ring R'
    TauRing t1 = adjoin_rho(PrimeP(3), 3);
    CHECK(t1.rho_order_ok);
    CHECK(t1.tau_order_ok);
    CHECK(t1.fixed_ring_ok);
    // R' = Z/4 at p = 3 (the 16-element-per-slot example)
    TauRing t2 = adjoin_rho(PrimeP(3), 4);
    CHECK(t2.rho_order_ok);
    CHECK(t2.tau_order_ok);
    CHECK(t2.fixed_ring_ok);
    // p = 5 over Z/25
    TauRing t3 = adjoin_rho(PrimeP(5), 25);
    CHECK(t3.rho_order_ok);
    CHECK(t3.tau_order_ok);
    CHECK(t3.fixed_ring_ok);
}

TEST_CASE("norm operator basics") {
    PrimeP p(3);
    SChoice ch = SChoice::choose(p);
    auto R1 = RingCtx::make(CoeffRing::quotient(p, 9, 0), {});
    RingHom tau = RingHom::make(R1, R1, ch.s, {});
    EtaOps ops(R1);
    CHECK(norm_N(ops, tau, ch, R1->zero()).is_zero());
    CHECK(norm_Nprime(ops, tau, ch, R1->zero()).is_zero());
    // eta -> 0 degeneration: N(z) = sum_k s^{p-2-k} tau^k(z), a twisted trace
    auto Fp = RingCtx::make(CoeffRing::quotient(p, 0, 1), {});
    RingHom tauF = RingHom::make(Fp, Fp, ch.s, {});
    EtaOps fops(Fp);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        RingElem z = sample_element(Fp, rng, 0, 50);
        RingElem expect = Fp->zero();
        RingElem w = z;
        for (int k = 0; k <= 1; ++k) {
            long cnt = 1;
            for (int i = 0; i < 1 - k; ++i) cnt *= ch.s;
            expect = expect + w * mpz_class(cnt);
            w = fops.delta_p_tau(tauF, w);
        }
        CHECK(norm_N(fops, tauF, ch, z) == expect);
    }
}

TEST_CASE("generic descent at p = 3 verifies symbolically") {
    GenericDescent g = build_generic_descent(PrimeP(3));
    CHECK(g.fully_verified);
    CHECK(g.cert.separable_norm);
    CHECK(g.cert.base_galois);
    CHECK(g.cert.tau_well_defined);
    CHECK(g.cert.tau_order);
    CHECK(g.cert.commute);
    CHECK(g.cert.norm_recursion);
    CHECK(g.cert.kummer_twist);
    CHECK(g.cert.eps_tau_fixed);
    CHECK(g.cert.eps_shift_mod_eta);
}

TEST_CASE("specialization x = (1,0) into Z[rho]/(9)") {
    PrimeP p(3);
    std::vector<CycInt> xs{CycInt::from_int(p, 1), CycInt(p)};
    SpecializedDescent s = specialize_descent(p, CoeffRing::quotient(p, 9, 0), xs);
    CHECK(s.cert.base_galois);
    CHECK(s.cert.tau_well_defined);
    CHECK(s.cert.tau_order);
    CHECK(s.cert.commute);
    CHECK(s.cert.norm_recursion);
    CHECK(s.cert.kummer_twist);
    CHECK(s.cert.eps_tau_fixed);
    CHECK(s.cert.eps_shift_mod_eta);
    CHECK(s.eps_spans);
    // the generic object maps onto it
    GenericDescent g = build_generic_descent(p);
    CHECK(verify_specialization_hom(g, s));
    // sigma-fixed units of 1 + S eta come from the base
    CHECK(sigma_fixed_units_check(s.ext));
}

TEST_CASE("eta -> 0 specialization gives the classical twist") {
    PrimeP p(3);
    std::vector<CycInt> xs{CycInt::from_int(p, 1), CycInt(p)};
    SpecializedDescent s = specialize_descent(p, CoeffRing::quotient(p, 0, 1), xs);
    CHECK(s.cert.tau_order);
    CHECK(s.cert.commute);
    // delta tau(theta) = s theta with everything eta-adic gone; since
    // delta_s = s modulo eta, tau itself fixes the Artin-Schreier generator
    RingElem theta = s.ext.theta();
    EtaOps ops(s.ext.ext_ctx());
    CHECK(ops.delta_tau(s.tauS, theta) == theta * mpz_class(s.ch.s));
    CHECK(s.tauS.apply(theta) == theta);
}

TEST_CASE("z-improvement pipeline reproduces the normal form") {
    PrimeP p(3);
    std::vector<CycInt> xs{CycInt::from_int(p, 1), CycInt(p)};
    SpecializedDescent s = specialize_descent(p, CoeffRing::quotient(p, 9, 0), xs);
    DescentDatum d = improve_to_normal_form(s.ext.ext_ctx(), s.ext.sigma(), s.tauS,
                                            s.ch, s.ext.theta());
    for (const auto& st : d.steps) {
        INFO(st.name, ": ", st.note);
        CHECK(st.ok);
    }
    CHECK(d.ok());
    // final data: u = N(z) = g(theta) + theta^p and 1 + z eta^p a unit
    EtaOps ops(s.ext.ext_ctx());
    CHECK(try_invert(ops.phi_p(d.z)).has_value());
}

TEST_CASE("rho-free lift Z/9 -> F_3 (the headline)") {
    RhoFreeLift lift = lift_without_rho(PrimeP(3), 9, 3, 1);
    for (const auto& st : lift.datum.steps) {
        INFO("datum step ", st.name, ": ", st.note);
        CHECK(st.ok);
    }
    for (const auto& c : lift.checks) {
        INFO("check ", c.name, ": ", c.note);
        CHECK(c.ok);
    }
    CHECK(lift.ok());
    REQUIRE(lift.ext_up.has_value());
    CHECK(lift.ext_up->cert().all());
}

TEST_CASE("rho-free lift from the deeper tower Z/27 -> F_3") {
    RhoFreeLift lift = lift_without_rho(PrimeP(3), 27, 3, 1);
    CHECK(lift.ok());
    REQUIRE(lift.ext_up.has_value());
    CHECK(lift.ext_up->cert().all());
}

TEST_CASE("improvement chain from a shifted starting generator") {
    PrimeP p(3);
    std::vector<CycInt> xs{CycInt::from_int(p, 1), CycInt(p)};
    SpecializedDescent s = specialize_descent(p, CoeffRing::quotient(p, 9, 0), xs);
    EtaOps ops(s.ext.ext_ctx());
    RingElem y = s.ext.inclusion().apply(s.R1->from_int(2));
    RingElem theta2 = ops.oplus(s.ext.theta(), y);
    DescentDatum d = improve_to_normal_form(s.ext.ext_ctx(), s.ext.sigma(), s.tauS,
                                            s.ch, theta2);
    for (const auto& st : d.steps) {
        INFO(st.name, ": ", st.note);
        CHECK(st.ok);
    }
    CHECK(d.ok());
}

TEST_CASE("rho-free lift degenerates to plain lifting at p = 2") {
    RhoFreeLift lift = lift_without_rho(PrimeP(2), 4, 2, 1);
    CHECK(lift.ok());
    REQUIRE(lift.ext_up.has_value());
    CHECK(lift.ext_up->cert().all());
}

TEST_CASE("eigen analysis of B*/B*_p at p = 3") {
    PrimeP p(3);
    std::vector<CycInt> xs{CycInt::from_int(p, 1), CycInt(p)};
    SpecializedDescent s = specialize_descent(p, CoeffRing::quotient(p, 9, 0), xs);
    EigenNormReport rep = eigen_norm_analysis(s);
    for (const auto& e : rep.entries) {
        INFO("a = ", e.a, ", found = ", e.found, ", witness = ", e.witness);
    }
    CHECK(rep.consistent);
}
