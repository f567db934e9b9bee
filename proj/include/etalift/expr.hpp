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

#ifndef ETALIFT_EXPR_HPP
#define ETALIFT_EXPR_HPP

#include <string>

#include "etalift/ring.hpp"

namespace etalift {

/// Parse the tiny arithmetic grammar: +, -, *, ^ (nonnegative integer
/// exponents), integer literals, parentheses, `rho`, `eta`, variable names
/// and declared inverse names. Evaluates directly to a normal form.
RingElem parse_expr(const CtxPtr& ctx, const std::string& text);

}  // namespace etalift

#endif
