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

   Acceptance suite: one pass/fail line per criterion, each with its runtime
   budget. Everything is exact integer arithmetic; there are no tolerances.
*/

#include <array>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "etalift/descent.hpp"
#include "etalift/galois.hpp"
#include "etalift/json_io.hpp"
#include "etalift/qweyl.hpp"

using namespace etalift;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int index, const std::string& name, bool ok, double seconds, double limit,
            const std::string& note = "") {
    bool in_time = seconds < limit;
    std::ostringstream line;
    line << "criterion " << index << " [" << name << "]: "
         << ((ok && in_time) ? "PASS" : "FAIL") << " (" << seconds << "s < " << limit
         << "s)";
    if (!note.empty()) line << "  -- " << note;
    std::cout << line.str() << std::endl;
    if (!(ok && in_time)) ++failures;
}

template <typename F>
void run(int index, const std::string& name, double limit, F&& body) {
    auto start = Clock::now();
    bool ok = false;
    std::string note;
    try {
        ok = body(note);
    } catch (const std::exception& e) {
        ok = false;
        note = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    report(index, name, ok, secs, limit, note);
}

// single-step word rewriting, independent of the memoized engine
std::map<std::string, CycInt> word_oracle(PrimeP p, const std::string& w0) {
    std::map<std::string, CycInt> acc, work;
    work.emplace(w0, CycInt::from_int(p, 1));
    CycInt rho = CycInt::rho(p);
    while (!work.empty()) {
        auto it = work.begin();
        std::string w = it->first;
        CycInt c = it->second;
        work.erase(it);
        size_t pos = w.find("xy");
        auto& target = (pos == std::string::npos) ? acc : work;
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
        (void)target;
        std::string swapped = w;
        swapped[pos] = 'y';
        swapped[pos + 1] = 'x';
        std::string dropped = w.substr(0, pos) + w.substr(pos + 2);
        for (auto& [word, coeff] :
             std::initializer_list<std::pair<std::string, CycInt>>{{swapped, c * rho},
                                                                   {dropped, c}}) {
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

QWeylElem oracle_elem(PrimeP p, const std::map<std::string, CycInt>& words) {
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

std::string run_command(const std::string& cmd) {
    std::string out;
    FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!pipe) return out;
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    pclose(pipe);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli = argc > 1 ? argv[1] : "";

    run(1, "structural constants", 1.0, [](std::string&) {
        for (int pv : {2, 3, 5, 7, 11}) (void)EtaData::compute(PrimeP(pv));
        return true;  // all four identities re-verified inside compute()
    });

    run(2, "defining polynomial identity", 5.0, [](std::string& note) {
        // GenASPoly::get proves both displays exactly in Z[rho][Z,u] / Z[rho][z]
        for (int pv : {2, 3, 5, 7}) (void)GenASPoly::get(PrimeP(pv));
        const GenASPoly& g2 = GenASPoly::get(PrimeP(2));
        bool classical = (g2.g[1] == CycInt::from_int(PrimeP(2), -1));
        note = "p=2: g(Z) = -Z";
        return classical;
    });

    run(3, "eta-calculus identity suite", 60.0, [](std::string& note) {
        bool ok = true;
        for (int pv : {2, 3, 5}) {
            SuiteReport rep = identity_suite(PrimeP(pv), 25, 7);
            ok = ok && rep.all_pass() && rep.results.size() == 18 * 4;
        }
        note = "18 identities, symbolic + {Z[rho]/(p^2), F_p, Z[rho]/(q)}";
        return ok;
    });

    run(4, "Galois certificates", 30.0, [](std::string& note) {
        bool ok = true;
        for (int pv : {2, 3}) {
            PrimeP p(pv);
            // (i) classical Artin-Schreier over F_p
            auto Fp = RingCtx::make(CoeffRing::quotient(p, 0, 1), {});
            ok = ok && GaloisExt::build(Fp, Fp->one()).cert().all();
            // (ii) Kummer over Z[rho]/(q), q = 1 mod p
            int q = smallest_split_prime(pv);
            auto Zq = RingCtx::make(CoeffRing::quotient(p, q, 0), {});
            RingElem a = Zq->one();
            for (int k = 1; k < q; ++k) {
                a = Zq->from_int(k);
                if (is_separable_param(Zq, a).first) break;
            }
            ok = ok && GaloisExt::build(Zq, a).cert().all();
            // (iii) mixed characteristic over Z[rho]/(p^2)
            auto Zp2 = RingCtx::make(CoeffRing::quotient(p, pv * pv, 0), {});
            ok = ok && GaloisExt::build(Zp2, Zp2->one()).cert().all();
        }
        note = "F_p classical, Z[rho]/(q) Kummer, Z[rho]/(p^2) mixed";
        return ok;
    });

    run(5, "lifting", 60.0, [](std::string& note) {
        bool ok = true;
        for (int pv : {2, 3}) {
            PrimeP p(pv);
            auto up = RingCtx::make(CoeffRing::quotient(p, pv * pv, 0), {});
            auto dn = RingCtx::make(CoeffRing::quotient(p, 0, 1), {});
            RingHom h = RingHom::make(up, dn, 1, {});
            GaloisExt target = GaloisExt::build(dn, dn->one());
            ExtLift lift = lift_extension(h, target);
            ok = ok && lift.reduction_ok && lift.lifted.cert().all();
        }
        RhoFreeLift rf = lift_without_rho(PrimeP(3), 9, 3, 1);
        ok = ok && rf.ok();
        note = "Z[rho]/(p^2) -> F_p and the rho-free Z/9 -> F_3";
        return ok;
    });

    run(6, "descent (generic construction at p = 3)", 120.0, [](std::string& note) {
        GenericDescent g = build_generic_descent(PrimeP(3));
        bool ok = g.fully_verified && g.cert.tau_well_defined && g.cert.tau_order &&
                  g.cert.commute && g.cert.eps_tau_fixed && g.cert.eps_shift_mod_eta;
        std::vector<CycInt> xs{CycInt::from_int(PrimeP(3), 1), CycInt(PrimeP(3))};
        SpecializedDescent sd =
            specialize_descent(PrimeP(3), CoeffRing::quotient(PrimeP(3), 9, 0), xs);
        ok = ok && sd.cert.eps_shift_mod_eta && sd.eps_spans &&
             verify_specialization_hom(g, sd);
        note = "tau^{p-1} = 1 and sigma tau = tau sigma symbolically; eps at Z[rho]/(9)";
        return ok;
    });

    run(7, "q-Weyl algebra", 300.0, [](std::string& note) {
        bool ok = true;
        // centrality and the closed commutation form, engine vs word oracle
        for (int pv : {2, 3, 5}) {
            PrimeP p(pv);
            ok = ok && verify_center(p).all();
            for (int i = 0; i <= 2 * pv; ++i) {
                std::string w(i, 'x');
                w += 'y';
                ok = ok && (qweyl_word(p, w) == oracle_elem(p, word_oracle(p, w)));
            }
        }
        // p = 2 symbolic determinant: unit times a power of the hypersurface
        AzumayaSymbolic sym = azumaya_det_symbolic(PrimeP(2));
        ok = ok && sym.factored && sym.power >= 1 && sym.mod_p_unit;
        std::ostringstream n;
        n << "p=2 det = (" << sym.unit.to_string() << ") * (" << sym.pi_form << ")^"
          << sym.power;
        if (sym.twisted)
            n << " [1+4st holds after the center sign flip t -> -t]";
        // 49-point sweeps over F_7
        AzumayaPointSweep s2 = azumaya_point_sweep(PrimeP(2), 7, 6);
        AzumayaPointSweep s3 = azumaya_point_sweep(PrimeP(3), 7, 2);
        ok = ok && s2.points_checked == 49 && s2.locus_matches && s2.nilpotent_witness;
        ok = ok && s3.points_checked == 49 && s3.locus_matches && s3.matches_plain &&
             s3.nilpotent_witness;
        // differential crossed products over F_p, 50 samples incl. c = b = 0
        std::mt19937_64 rng(2026);
        for (int pv : {2, 3}) {
            PrimeP p(pv);
            auto Fp = RingCtx::make(CoeffRing::quotient(p, 0, 1), {});
            ok = ok && diff_crossed_product_check(Fp, Fp->zero(), Fp->zero()).azumaya;
            for (int t = 0; t < 50; ++t) {
                RingElem c = sample_element(Fp, rng, 0, 50);
                RingElem b = sample_element(Fp, rng, 0, 50);
                ok = ok && diff_crossed_product_check(Fp, c, b).azumaya;
            }
        }
        note = n.str();
        return ok;
    });

    run(8, "Brauer lift demo", 60.0, [](std::string& note) {
        bool ok = true;
        for (int pv : {2, 3}) {
            PrimeP p(pv);
            auto R = RingCtx::make(CoeffRing::quotient(p, pv * pv, 0), {});
            auto Fp = RingCtx::make(CoeffRing::quotient(p, 0, 1), {});
            RingHom red = RingHom::make(R, Fp, 1, {});
            BrauerLiftCert cert = brauer_lift_demo(R, red, Fp->zero(), Fp->zero());
            ok = ok && cert.all();
        }
        note = "[0,0] over F_p lifted to Z[rho]/(p^2), certified Azumaya, reduces back";
        return ok;
    });

    if (!cli.empty()) {
        run(9, "CLI determinism", 60.0, [&](std::string& note) {
            bool ok = true;
            for (const std::string& args :
                 {std::string("eta-data --p 3 --no-timing"),
                  std::string("gpoly --p 3 --no-timing"),
                  std::string("identities --p 2 --samples 6 --seed 11 --no-timing"),
                  std::string("qweyl nf --p 3 --word xyxy --no-timing"),
                  std::string("qweyl azumaya --p 2 --mode sym --no-timing")}) {
                std::string a = run_command(cli + " " + args);
                std::string b = run_command(cli + " " + args);
                ok = ok && !a.empty() && a == b;
            }
            note = "byte-identical reruns with fixed seeds";
            return ok;
        });
    } else {
        report(9, "CLI determinism", false, 0.0, 60.0, "CLI path not supplied");
    }

    std::cout << (failures == 0 ? "ACCEPTANCE: ALL CRITERIA PASS"
                                : "ACCEPTANCE: FAILURES PRESENT")
              << std::endl;
    return failures;
}
