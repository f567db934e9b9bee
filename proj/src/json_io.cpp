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

#include "etalift/json_io.hpp"

#include <fstream>

#include "etalift/expr.hpp"

namespace etalift {

OJson cyc_to_json(const CycInt& a) {
    OJson j;
    j["p"] = a.prime().get();
    OJson coeffs = OJson::array();
    for (const auto& c : a.coeffs()) coeffs.push_back(c.get_str());
    j["coeffs"] = coeffs;
    return j;
}

CycInt cyc_from_json(const OJson& j) {
    PrimeP p(j.at("p").get<int>());
    std::vector<mpz_class> coeffs;
    for (const auto& c : j.at("coeffs")) {
        if (c.is_string())
            coeffs.emplace_back(c.get<std::string>());
        else
            coeffs.emplace_back((long)c.get<long long>());
    }
    return CycInt(p, std::move(coeffs));
}

OJson elem_to_json(const RingElem& a) {
    OJson j;
    OJson terms = OJson::array();
    for (const auto& [m, c] : a.terms()) {
        OJson t;
        t["mono"] = m;
        t["coeff"] = cyc_to_json(c);
        terms.push_back(t);
    }
    j["terms"] = terms;
    j["den"] = a.den();
    j["text"] = a.to_string();
    return j;
}

OJson eta_data_to_json(const EtaData& d) {
    OJson j;
    j["p"] = d.p.get();
    j["eta"] = cyc_to_json(d.eta);
    OJson b = OJson::array();
    for (const auto& bi : d.b) b.push_back(bi.get_str());
    j["b"] = b;
    j["y"] = cyc_to_json(d.y);
    j["x"] = cyc_to_json(d.x_unit);
    j["identities"] = {{"eta_pm1_eq_minus_p_y", true},
                       {"p_eq_x_eta_pm1", true},
                       {"x_y_eq_minus_1", true},
                       {"x_eq_minus_1_mod_eta", true}};
    return j;
}

OJson gpoly_to_json(const GenASPoly& g) {
    OJson j;
    j["p"] = g.p.get();
    OJson coeffs = OJson::array();
    for (size_t i = 1; i < g.g.size(); ++i) {
        OJson c;
        c["degree"] = i;
        c["coeff"] = cyc_to_json(g.g[i]);
        coeffs.push_back(c);
    }
    j["g"] = coeffs;
    return j;
}

OJson suite_report_to_json(const SuiteReport& rep) {
    OJson j;
    j["p"] = rep.p;
    j["seed"] = rep.seed;
    j["samples"] = rep.samples;
    OJson rows = OJson::array();
    for (const auto& r : rep.results) {
        OJson row;
        row["identity_index"] = r.index;
        row["formula"] = r.formula;
        row["ring"] = r.ring;
        row["status"] = r.status;
        row["samples"] = r.samples;
        if (!r.counterexample.empty()) row["counterexample"] = r.counterexample;
        rows.push_back(row);
    }
    j["results"] = rows;
    j["all_pass"] = rep.all_pass();
    return j;
}

OJson galois_cert_to_json(const GaloisCert& c) {
    OJson j;
    j["separable"] = c.separable;
    j["order_p"] = c.sigma_order_p;
    j["sigma_shift"] = c.sigma_shift;
    j["factorization"] = c.factorization;
    j["unit_differences"] = c.unit_differences;
    j["fixed_ring"] = c.fixed_ring;
    j["discriminant_unit"] = c.discriminant_unit;
    j["discriminant_form"] = c.discriminant_form;
    j["kummer_alpha"] = c.kummer_alpha;
    j["all"] = c.all();
    return j;
}

CtxPtr ctx_from_json(const OJson& j) {
    const OJson& bj = j.at("base");
    PrimeP p(bj.at("p").get<int>());
    CoeffRing base(p);
    if (bj.contains("residue") && !bj["residue"].is_null()) {
        mpz_class q((long)bj["residue"].at("q").get<long long>());
        mpz_class r0((long)bj["residue"].at("rho").get<long long>());
        base = CoeffRing::residue_field(p, q, r0);
    } else {
        mpz_class m = 0;
        int etak = 0;
        if (bj.contains("m") && !bj["m"].is_null()) {
            if (bj["m"].is_string())
                m = mpz_class(bj["m"].get<std::string>());
            else
                m = (long)bj["m"].get<long long>();
        }
        if (bj.contains("eta_power") && !bj["eta_power"].is_null())
            etak = bj["eta_power"].get<int>();
        base = CoeffRing::quotient(p, m, etak);
    }
    std::vector<std::string> vars;
    if (j.contains("vars"))
        for (const auto& v : j["vars"]) vars.push_back(v.get<std::string>());

    // rules and inverses are parsed against a rule-free scratch ring
    auto scratch = RingCtx::make(base, vars);
    std::vector<PowerRule> rules;
    if (j.contains("power_rules"))
        for (const auto& rj : j["power_rules"]) {
            size_t var = scratch->var_index(rj.at("var").get<std::string>());
            uint32_t n = rj.at("power").get<uint32_t>();
            RingElem rhs = rj.contains("rhs") && !rj["rhs"].is_null()
                               ? parse_expr(scratch, rj["rhs"].get<std::string>())
                               : scratch->zero();
            if (!rhs.is_polynomial())
                throw ArgumentError("rule right-hand side must be denominator-free");
            rules.push_back({var, n, rhs.terms()});
        }
    std::vector<std::pair<std::string, TermMap>> denoms;
    if (j.contains("inverses"))
        for (const auto& ij : j["inverses"]) {
            RingElem num = parse_expr(scratch, ij.at(0).get<std::string>());
            if (!num.is_polynomial())
                throw ArgumentError("declared inverse must be of a polynomial");
            denoms.emplace_back(ij.at(1).get<std::string>(), num.terms());
        }
    return RingCtx::make(base, vars, rules, denoms);
}

OJson ctx_to_json(const RingCtx& ctx) {
    OJson j;
    OJson base;
    base["p"] = ctx.prime().get();
    OJson gens = OJson::array();
    for (const auto& g : ctx.base().ideal_gens()) gens.push_back(cyc_to_json(g));
    base["ideal_gens"] = gens;
    j["base"] = base;
    j["vars"] = ctx.vars();
    OJson rules = OJson::array();
    for (const auto& r : ctx.rules()) {
        OJson rj;
        rj["var"] = ctx.vars()[r.var];
        rj["power"] = r.n;
        rules.push_back(rj);
    }
    j["power_rules"] = rules;
    j["inverses"] = ctx.denom_names();
    return j;
}

OJson load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open " + path);
    OJson j;
    in >> j;
    return j;
}

}  // namespace etalift
