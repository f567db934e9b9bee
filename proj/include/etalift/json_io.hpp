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

#ifndef ETALIFT_JSON_IO_HPP
#define ETALIFT_JSON_IO_HPP

#include <json.hpp>

#include "etalift/eta_ops.hpp"
#include "etalift/galois.hpp"
#include "etalift/ring.hpp"

namespace etalift {

using OJson = nlohmann::ordered_json;

/// {"p": int, "coeffs": ["...", ...]} with string-encoded integers.
OJson cyc_to_json(const CycInt& a);
CycInt cyc_from_json(const OJson& j);

OJson elem_to_json(const RingElem& a);
OJson eta_data_to_json(const EtaData& d);
OJson gpoly_to_json(const GenASPoly& g);
OJson suite_report_to_json(const SuiteReport& rep);
OJson galois_cert_to_json(const GaloisCert& c);

/// Ring presentation descriptor:
/// {"base": {"m": int|string|null, "eta_power": int|null, "p": int,
///           "residue": {"q": int, "rho": int}?},
///  "vars": [...],
///  "inverses": [[num_expr, name], ...],
///  "power_rules": [{"var": name, "power": n, "rhs": expr}, ...]}
CtxPtr ctx_from_json(const OJson& j);
OJson ctx_to_json(const RingCtx& ctx);

OJson load_json_file(const std::string& path);

}  // namespace etalift

#endif
