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

#include "etalift/expr.hpp"

#include <cctype>

namespace etalift {

namespace {

struct Parser {
    const CtxPtr& ctx;
    const std::string& s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }

    [[noreturn]] void fail(const std::string& what) {
        throw ArgumentError("expression parse error at offset " + std::to_string(pos) +
                            ": " + what);
    }

    RingElem parse() {
        RingElem e = expr();
        skip_ws();
        if (pos != s.size()) fail("trailing input");
        return e;
    }

    RingElem expr() {
        RingElem acc = term();
        while (true) {
            if (eat('+'))
                acc = acc + term();
            else if (eat('-'))
                acc = acc - term();
            else
                return acc;
        }
    }

    RingElem term() {
        RingElem acc = factor();
        while (eat('*')) acc = acc * factor();
        return acc;
    }

    RingElem factor() {
        RingElem a = atom();
        if (eat('^')) {
            skip_ws();
            unsigned long e = 0;
            if (pos >= s.size() || !std::isdigit((unsigned char)s[pos]))
                fail("exponent must be a nonnegative integer");
            while (pos < s.size() && std::isdigit((unsigned char)s[pos]))
                e = e * 10 + (unsigned long)(s[pos++] - '0');
            return a.pow(e);
        }
        return a;
    }

    RingElem atom() {
        skip_ws();
        if (eat('-')) return -factor();
        if (eat('(')) {
            RingElem e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (pos < s.size() && std::isdigit((unsigned char)s[pos])) {
            size_t start = pos;
            while (pos < s.size() && std::isdigit((unsigned char)s[pos])) ++pos;
            return ctx->from_int(mpz_class(s.substr(start, pos - start)));
        }
        if (pos < s.size() &&
            (std::isalpha((unsigned char)s[pos]) || s[pos] == '_')) {
            size_t start = pos;
            while (pos < s.size() && (std::isalnum((unsigned char)s[pos]) || s[pos] == '_'))
                ++pos;
            std::string name = s.substr(start, pos - start);
            if (name == "rho") return ctx->rho();
            if (name == "eta") return ctx->eta();
            for (size_t i = 0; i < ctx->ndenoms(); ++i)
                if (ctx->denom_names()[i] == name) return ctx->denom_inverse(i);
            for (size_t i = 0; i < ctx->nvars(); ++i)
                if (ctx->vars()[i] == name) return ctx->var(i);
            fail("unknown identifier '" + name + "'");
        }
        fail("expected an atom");
    }
};

}  // namespace

RingElem parse_expr(const CtxPtr& ctx, const std::string& text) {
    Parser p{ctx, text};
    return p.parse();
}

}  // namespace etalift
