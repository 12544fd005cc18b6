#ifndef CREMONA_PARSE_HPP
#define CREMONA_PARSE_HPP

/// Text form of homogeneous polynomials in x, y, z with integer coefficients.
///
/// Grammar (no implicit multiplication):
///   expr   := ['+' | '-'] term (('+' | '-') term)*
///   term   := factor ('*' factor)*
///   factor := atom ['^' integer]
///   atom   := integer | 'x' | 'y' | 'z' | '(' expr ')'
///
/// Arithmetic during parsing runs over ZZ without a homogeneity assumption;
/// the final result must be homogeneous and the error for a mixed-degree
/// input names the offending monomial. Syntax errors carry a 1-based
/// character position.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cremona/hpoly.hpp"

namespace cremona {

namespace detail {

// parse-time polynomial: exponent key -> integer coefficient, no degree rule
using ZTerms = std::map<u64, Int>;

inline void zp_addto(ZTerms& a, const ZTerms& b, bool negate) {
    for (const auto& [k, c] : b) {
        auto it = a.find(k);
        if (it == a.end()) {
            a.emplace(k, negate ? Int(-c) : c);
        } else {
            if (negate)
                it->second -= c;
            else
                it->second += c;
            if (it->second == 0) a.erase(it);
        }
    }
}

inline ZTerms zp_mul(const ZTerms& a, const ZTerms& b, std::size_t pos) {
    ZTerms out;
    for (const auto& [ka, ca] : a)
        for (const auto& [kb, cb] : b) {
            if (key_a(ka) + key_a(kb) > kMaxExponent ||
                key_b(ka) + key_b(kb) > kMaxExponent ||
                key_c(ka) + key_c(kb) > kMaxExponent)
                throw parse_error("exponent overflow in product", pos);
            u64 k = ka + kb;
            auto it = out.find(k);
            if (it == out.end()) {
                out.emplace(k, ca * cb);
            } else {
                it->second += ca * cb;
                if (it->second == 0) out.erase(it);
            }
            if (out.size() > 200000)
                throw parse_error("expression expands to too many terms", pos);
        }
    return out;
}

struct PolyToken {
    enum Kind { Int_, Var, Plus, Minus, Star, Caret, LParen, RParen, End };
    Kind kind;
    Int value;        // for Int_
    unsigned var;     // 0, 1, 2 for x, y, z
    std::size_t pos;  // 1-based character position
};

inline std::vector<PolyToken> poly_tokenize(std::string_view text) {
    std::vector<PolyToken> out;
    std::size_t i = 0;
    while (i < text.size()) {
        char ch = text[i];
        std::size_t pos = i + 1;
        if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') {
            ++i;
            continue;
        }
        if (ch >= '0' && ch <= '9') {
            std::size_t j = i;
            while (j < text.size() && text[j] >= '0' && text[j] <= '9') ++j;
            out.push_back({PolyToken::Int_,
                           Int(std::string(text.substr(i, j - i))), 0, pos});
            i = j;
            continue;
        }
        switch (ch) {
            case 'x': out.push_back({PolyToken::Var, 0, 0, pos}); break;
            case 'y': out.push_back({PolyToken::Var, 0, 1, pos}); break;
            case 'z': out.push_back({PolyToken::Var, 0, 2, pos}); break;
            case '+': out.push_back({PolyToken::Plus, 0, 0, pos}); break;
            case '-': out.push_back({PolyToken::Minus, 0, 0, pos}); break;
            case '*': out.push_back({PolyToken::Star, 0, 0, pos}); break;
            case '^': out.push_back({PolyToken::Caret, 0, 0, pos}); break;
            case '(': out.push_back({PolyToken::LParen, 0, 0, pos}); break;
            case ')': out.push_back({PolyToken::RParen, 0, 0, pos}); break;
            default:
                throw parse_error(
                    std::string("unexpected character '") + ch + "'", pos);
        }
        ++i;
    }
    out.push_back({PolyToken::End, 0, 0, text.size() + 1});
    return out;
}

class PolyParser {
  public:
    explicit PolyParser(std::string_view text) : toks_(poly_tokenize(text)) {}

    ZTerms run() {
        auto v = expr();
        if (peek().kind != PolyToken::End)
            throw parse_error("unexpected trailing input", peek().pos);
        return v;
    }

  private:
    std::vector<PolyToken> toks_;
    std::size_t at_ = 0;

    const PolyToken& peek() const { return toks_[at_]; }
    const PolyToken& take() { return toks_[at_++]; }

    ZTerms expr() {
        bool neg = false;
        if (peek().kind == PolyToken::Plus) {
            take();
        } else if (peek().kind == PolyToken::Minus) {
            take();
            neg = true;
        }
        ZTerms acc;
        zp_addto(acc, term(), neg);
        while (peek().kind == PolyToken::Plus ||
               peek().kind == PolyToken::Minus) {
            bool minus = take().kind == PolyToken::Minus;
            zp_addto(acc, term(), minus);
        }
        return acc;
    }

    ZTerms term() {
        ZTerms acc = factor();
        while (peek().kind == PolyToken::Star) {
            std::size_t pos = take().pos;
            acc = zp_mul(acc, factor(), pos);
        }
        return acc;
    }

    ZTerms factor() {
        ZTerms base = atom();
        if (peek().kind != PolyToken::Caret) return base;
        std::size_t cpos = take().pos;
        if (peek().kind != PolyToken::Int_)
            throw parse_error("expected an integer exponent after '^'",
                              peek().pos);
        const auto& e = take();
        if (e.value < 0 || e.value > long(kMaxExponent))
            throw parse_error("exponent out of range", e.pos);
        unsigned long n = e.value.get_ui();
        ZTerms acc{{exp_key(0, 0, 0), Int(1)}};
        ZTerms b = base;
        while (n) {
            if (n & 1) acc = zp_mul(acc, b, cpos);
            n >>= 1;
            if (n) b = zp_mul(b, b, cpos);
        }
        return acc;
    }

    ZTerms atom() {
        const auto& t = peek();
        switch (t.kind) {
            case PolyToken::Int_: {
                take();
                ZTerms out;
                if (t.value != 0) out.emplace(exp_key(0, 0, 0), t.value);
                return out;
            }
            case PolyToken::Var: {
                take();
                ZTerms out;
                out.emplace(exp_key(t.var == 0, t.var == 1, t.var == 2),
                            Int(1));
                return out;
            }
            case PolyToken::LParen: {
                take();
                auto v = expr();
                if (peek().kind != PolyToken::RParen)
                    throw parse_error("expected ')'", peek().pos);
                take();
                return v;
            }
            case PolyToken::End:
                throw parse_error("unexpected end of input", t.pos);
            default:
                throw parse_error("expected a number, variable, or '('",
                                  t.pos);
        }
    }
};

inline std::string monomial_name(u64 key) {
    unsigned e[3] = {key_a(key), key_b(key), key_c(key)};
    const char* names = "xyz";
    std::string s;
    for (int v = 0; v < 3; ++v) {
        if (e[v] == 0) continue;
        if (!s.empty()) s += "*";
        s += names[v];
        if (e[v] > 1) s += "^" + std::to_string(e[v]);
    }
    return s.empty() ? "1" : s;
}

}  // namespace detail

/// Parse a homogeneous polynomial with integer coefficients over the ring.
template <class Ring>
HPoly<Ring> hp_parse(const Ring& R, std::string_view text) {
    detail::PolyParser parser(text);
    detail::ZTerms z = parser.run();
    if (z.empty()) return HPoly<Ring>{};

    unsigned deg = 0;
    bool first = true;
    for (const auto& [k, c] : z) {
        unsigned d = key_a(k) + key_b(k) + key_c(k);
        if (first) {
            deg = d;
            first = false;
        } else if (d != deg) {
            throw parse_error("polynomial is not homogeneous: monomial " +
                                  detail::monomial_name(k) + " has degree " +
                                  std::to_string(d) + " but " +
                                  detail::monomial_name(z.begin()->first) +
                                  " has degree " + std::to_string(deg),
                              1);
        }
    }

    std::vector<typename HPoly<Ring>::Term> raw;
    raw.reserve(z.size());
    for (const auto& [k, c] : z) {
        auto e = R.from_int(c);
        if (!R.is_zero(e)) raw.push_back({k, e});
    }
    return hp_from_terms(R, deg, std::move(raw));
}

}  // namespace cremona

#endif  // CREMONA_PARSE_HPP
