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
#include "etalift/qweyl.hpp"

using namespace etalift;

namespace {

// Independent oracle: reduce a formal word over {x,y} by single-step
// replacements of the leftmost "xy" with rho*"yx" + "", coalescing equal
// words. Shares nothing with the memoized engine.
std::map<std::string, CycInt> reduce_word_oracle(PrimeP p, const std::string& w0) {
    std::map<std::string, CycInt> acc;
    std::map<std::string, CycInt> work;
    work.emplace(w0, CycInt::from_int(p, 1));
    CycInt rho = CycInt::rho(p);
    while (!work.empty()) {
        auto it = work.begin();
        std::string w = it->first;
        CycInt c = it->second;
        work.erase(it);
        size_t pos = w.find("xy");
        if (pos == std::string::npos) {
            auto jt = acc.find(w);
            if (jt == acc.end())
                acc.emplace(w, c);
            else {
                jt->second = jt->second + c;
                if (jt->second.is_zero()) acc.erase(jt);
            }
            continue;
        }
        std::string swapped = w;
        swapped[pos] = 'y';
        swapped[pos + 1] = 'x';
        std::string dropped = w.substr(0, pos) + w.substr(pos + 2);
        for (auto& [word, coeff] : std::initializer_list<std::pair<std::string, CycInt>>{
                 {swapped, c * rho}, {dropped, c}}) {
            auto jt = work.find(word);
            if (jt == work.end())
                work.emplace(word, coeff);
            else {
                jt->second = jt->second + coeff;
                if (jt->second.is_zero()) work.erase(jt);
            }
        }
    }
    return acc;
}

QWeylElem oracle_to_elem(PrimeP p, const std::map<std::string, CycInt>& words) {
    std::map<QWeylElem::Key, CycInt> t;
    for (const auto& [w, c] : words) {
        uint32_t ys = 0, xs = 0;
        for (char ch : w) (ch == 'y' ? ys : xs) += 1;
        auto it = t.find({ys, xs});
        if (it == t.end())
            t.emplace(QWeylElem::Key{ys, xs}, c);
        else
            it->second = it->second + c;
    }
    return QWeylElem(p, std::move(t));
}

QWeylElem random_qw(PrimeP p, std::mt19937_64& rng) {
    std::map<QWeylElem::Key, CycInt> t;
    std::uniform_int_distribution<int> e(0, 4), c(-9, 9);
    for (int k = 0; k < 3; ++k) {
        std::vector<mpz_class> coeffs(p.phi());
        for (auto& v : coeffs) v = c(rng);
        QWeylElem::Key key{(uint32_t)e(rng), (uint32_t)e(rng)};
        CycInt cc(p, std::move(coeffs));
        auto it = t.find(key);
        if (it == t.end())
            t.emplace(key, cc);
        else
            it->second = it->second + cc;
    }
    return QWeylElem(p, std::move(t));
}

}  // namespace

TEST_CASE("defining relation and closed commutation") {
    for (int pv : {2, 3, 5}) {
        PrimeP p(pv);
        QWeylElem X = QWeylElem::gen_x(p), Y = QWeylElem::gen_y(p);
        // x y = rho y x + 1
        QWeylElem expect = QWeylElem::monomial(p, 1, 1, CycInt::rho(p)) + QWeylElem::one(p);
        CHECK(X * Y == expect);
        CHECK(qweyl_word(p, "xy") == expect);
        // x^2 y = rho^2 y x^2 + (1 + rho) x
        QWeylElem e2 = QWeylElem::monomial(p, 1, 2, CycInt::rho_pow(p, 2)) +
                       QWeylElem::monomial(p, 0, 1, CycInt::delta(p, 2));
        CHECK(qweyl_word(p, "xxy") == e2);
        std::mt19937_64 rng(1);
        QWeylElem a = random_qw(p, rng);
        CHECK(QWeylElem::one(p) * a == a);
    }
    // p = 2: x^2 y = y x^2 exactly (1 + rho = 0)
    PrimeP p2(2);
    CHECK(qweyl_word(p2, "xxy") ==
          QWeylElem::monomial(p2, 1, 2, CycInt::from_int(p2, 1)));
}

TEST_CASE("normal forms agree with single-step word rewriting") {
    std::mt19937_64 rng(7);
    for (int pv : {2, 3, 5}) {
        PrimeP p(pv);
        for (int trial = 0; trial < 500; ++trial) {
            int len = 1 + (int)(rng() % 12);
            std::string w;
            for (int i = 0; i < len; ++i) w += (rng() & 1) ? 'x' : 'y';
            CHECK(qweyl_word(p, w) == oracle_to_elem(p, reduce_word_oracle(p, w)));
        }
        // the worst inversion pattern explicitly
        std::string worst(6, 'x');
        worst += std::string(6, 'y');
        CHECK(qweyl_word(p, worst) == oracle_to_elem(p, reduce_word_oracle(p, worst)));
    }
}

TEST_CASE("associativity on random triples") {
    std::mt19937_64 rng(11);
    for (int pv : {2, 3, 5}) {
        PrimeP p(pv);
        for (int t = 0; t < 200; ++t) {
            QWeylElem a = random_qw(p, rng), b = random_qw(p, rng), c = random_qw(p, rng);
            CHECK((a * b) * c == a * (b * c));
        }
    }
}

TEST_CASE("centrality of x^p and y^p") {
    std::mt19937_64 rng(13);
    for (int pv : {2, 3, 5}) {
        PrimeP p(pv);
        CenterReport rep = verify_center(p);
        CHECK(rep.xp_central);
        CHECK(rep.yp_central);
        CHECK(rep.commutation_closed_form);
        CHECK(rep.monomials_independent);
        QWeylElem XP = QWeylElem::monomial(p, 0, (uint32_t)pv, CycInt::from_int(p, 1));
        QWeylElem YP = QWeylElem::monomial(p, (uint32_t)pv, 0, CycInt::from_int(p, 1));
        for (int t = 0; t < 20; ++t) {
            QWeylElem w = random_qw(p, rng);
            CHECK((XP * w - w * XP).is_zero());
            CHECK((YP * w - w * YP).is_zero());
        }
    }
}

TEST_CASE("symbolic determinant at p = 2") {
    AzumayaSymbolic a = azumaya_det_symbolic(PrimeP(2));
    CHECK(a.factored);
    CHECK(a.power == 8);
    CHECK(cyc_invert(a.unit).has_value());
    CHECK(a.mod_p_unit);
    // the sign finding: 1 + rho s t eta^2 = 1 - 4st is the exact hypersurface
    CHECK(a.twisted);
    CHECK(a.pi_form == "1 + rho^{p(p-1)/2} s t eta^p");
    // dual route: the symbolic determinant evaluated at points equals the
    // pointwise psi determinant computed independently mod 7
    PrimeP p(2);
    auto F = RingCtx::make(CoeffRing::residue_field(p, 7, 6), {});
    for (int s0 : {0, 1, 3})
        for (int t0 : {0, 2, 5}) {
            RingHom ev = RingHom::make(a.det.ctx(), F, 1, {F->from_int(s0), F->from_int(t0)});
            RingElem dv = ev.apply(a.det);
            QWeylBounded B(p, F, F->from_int(s0), F->from_int(t0));
            ElemMat M = B.psi_matrix();
            RingElem dd = det(M);
            CHECK(dv == dd);
        }
    // the cap error branch for larger p
    CHECK_THROWS_AS(azumaya_det_symbolic(PrimeP(3)), ArgumentError);
}

TEST_CASE("pointwise Azumaya locus over F_7") {
    AzumayaPointSweep s2 = azumaya_point_sweep(PrimeP(2), 7, 6);
    CHECK(s2.points_checked == 49);
    CHECK(s2.locus_matches);
    CHECK(s2.matches_twisted);
    CHECK(s2.azumaya_points == 43);
    CHECK(s2.nilpotent_witness);
    AzumayaPointSweep s3 = azumaya_point_sweep(PrimeP(3), 7, 2);
    CHECK(s3.points_checked == 49);
    CHECK(s3.locus_matches);
    CHECK(s3.matches_plain);  // plain and twisted coincide for odd p
    CHECK(s3.matches_twisted);
    CHECK(s3.azumaya_points == 43);
    CHECK(s3.nilpotent_witness);
}

TEST_CASE("cyclic specialization") {
    PrimeP p(3);
    auto R = RingCtx::make(CoeffRing::quotient(p, 7, 0), {});
    CyclicSpecialization c = specialize_cyclic(p, R->from_int(3), R->from_int(2));
    CHECK(c.all());
    // char-p bridge: over F_p the relation collapses to beta gamma - gamma beta = 1
    auto Fp = RingCtx::make(CoeffRing::quotient(p, 0, 1), {});
    CyclicSpecialization cb = specialize_cyclic(p, Fp->from_int(1), Fp->from_int(2));
    CHECK(cb.all());
    QWeylBounded A(p, Fp, Fp->from_int(2), Fp->from_int(1));
    auto X = A.basis(0, 1, Fp->one());
    auto Y = A.basis(1, 0, Fp->one());
    auto comm = A.add(A.mul(X, Y), A.mul(A.mul(Y, X), A.unit(-Fp->one())));
    CHECK(A.eq(comm, A.unit(Fp->one())));
    // b must be a unit
    CHECK_THROWS_AS(specialize_cyclic(p, Fp->one(), Fp->zero()), UnitRequiredError);
}

TEST_CASE("differential crossed products are Azumaya") {
    std::mt19937_64 rng(17);
    for (int pv : {2, 3}) {
        PrimeP p(pv);
        auto Fp = RingCtx::make(CoeffRing::quotient(p, 0, 1), {});
        // c = b = 0 included
        DiffCrossedCert zero = diff_crossed_product_check(Fp, Fp->zero(), Fp->zero());
        CHECK(zero.azumaya);
        for (int t = 0; t < 50; ++t) {
            RingElem c = sample_element(Fp, rng, 0, 20);
            RingElem b = sample_element(Fp, rng, 0, 20);
            DiffCrossedCert cert = diff_crossed_product_check(Fp, c, b);
            CHECK(cert.azumaya);
        }
        // dual numbers: F_p[eps]/(eps^2), c = eps, b = 0
        auto Fpe = RingCtx::make(CoeffRing::quotient(p, 0, 1), {"eps"},
                                 {{0, 2, TermMap{}}});
        DiffCrossedCert dual =
            diff_crossed_product_check(Fpe, Fpe->var(0), Fpe->zero());
        CHECK(dual.azumaya);
    }
    // the pR = 0 precondition
    auto Z9 = RingCtx::make(CoeffRing::quotient(PrimeP(3), 9, 0), {});
    CHECK_THROWS_AS(diff_crossed_product_check(Z9, Z9->zero(), Z9->zero()),
                    ArgumentError);
}

TEST_CASE("Brauer lift demo") {
    for (int pv : {2, 3}) {
        PrimeP p(pv);
        mpz_class p2 = pv * pv;
        auto R = RingCtx::make(CoeffRing::quotient(p, p2, 0), {});
        auto Fp = RingCtx::make(CoeffRing::quotient(p, 0, 1), {});
        RingHom red = RingHom::make(R, Fp, 1, {});
        BrauerLiftCert cert = brauer_lift_demo(R, red, Fp->zero(), Fp->zero());
        CHECK(cert.hypothesis_units);
        CHECK(cert.lift_azumaya);
        CHECK(cert.reduction_matches);
        // with dual numbers: lift [eps, 1]
        auto Re = RingCtx::make(CoeffRing::quotient(p, p2, 0), {"eps"},
                                {{0, 2, TermMap{}}});
        auto Fpe = RingCtx::make(CoeffRing::quotient(p, 0, 1), {"eps"},
                                 {{0, 2, TermMap{}}});
        RingHom red2 = RingHom::make(Re, Fpe, 1, {Fpe->var(0)});
        BrauerLiftCert cert2 = brauer_lift_demo(Re, red2, Fpe->var(0), Fpe->one());
        CHECK(cert2.all());
    }
}
