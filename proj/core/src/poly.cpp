#include "phaseport/poly.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace phaseport {

Rational parse_rational(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ParseError("empty rational");
    auto slash = s.find('/');
    try {
        if (slash != std::string::npos) {
            Rational num(BigInt(s.substr(0, slash)));
            BigInt den(s.substr(slash + 1));
            if (den == 0) throw ParseError("zero denominator in '" + text + "'");
            return num / Rational(den);
        }
        auto dot = s.find('.');
        if (dot == std::string::npos) return Rational(BigInt(s));
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        size_t frac_len = s.size() - dot - 1;
        std::string sign;
        if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
            if (digits[0] == '-') sign = "-";
            digits.erase(digits.begin());
        }
        // strip leading zeros: cpp_int would read them as an octal prefix
        size_t first = digits.find_first_not_of('0');
        digits = first == std::string::npos ? "0" : digits.substr(first);
        if (digits.empty()) throw ParseError("bad number '" + text + "'");
        BigInt den = 1;
        for (size_t i = 0; i < frac_len; ++i) den *= 10;
        return Rational(BigInt(sign + digits)) / Rational(den);
    } catch (const std::exception& e) {
        throw ParseError("cannot parse rational '" + text + "': " + e.what());
    }
}

std::string format_rational(const Rational& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

double QuadExt::value() const {
    return to_double(a_) + to_double(b_) * std::sqrt(to_double(d_));
}

Poly2 Poly2::constant(const Rational& c) {
    Poly2 f;
    if (sgn(c) != 0) f.terms_[{0, 0}] = c;
    return f;
}

Poly2 Poly2::monomial(const Rational& c, int i, int j) {
    Poly2 f;
    if (sgn(c) != 0) f.terms_[{i, j}] = c;
    return f;
}

int Poly2::degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, e.first + e.second);
    return d;
}

int Poly2::min_degree() const {
    if (terms_.empty()) return -1;
    int d = INT32_MAX;
    for (const auto& [e, c] : terms_) d = std::min(d, e.first + e.second);
    return d;
}

int Poly2::degree_in(Var v) const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, v == Var::First ? e.first : e.second);
    return d;
}

Rational Poly2::coeff(int i, int j) const {
    auto it = terms_.find({i, j});
    return it == terms_.end() ? Rational(0) : it->second;
}

void Poly2::set_coeff(int i, int j, const Rational& c) {
    if (sgn(c) == 0)
        terms_.erase({i, j});
    else
        terms_[{i, j}] = c;
}

Poly2 Poly2::operator+(const Poly2& o) const {
    Poly2 r = *this;
    for (const auto& [e, c] : o.terms_) {
        auto it = r.terms_.find(e);
        if (it == r.terms_.end()) {
            r.terms_[e] = c;
        } else {
            it->second += c;
            if (sgn(it->second) == 0) r.terms_.erase(it);
        }
    }
    return r;
}

Poly2 Poly2::operator-() const {
    Poly2 r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

Poly2 Poly2::operator-(const Poly2& o) const { return *this + (-o); }

Poly2 Poly2::operator*(const Poly2& o) const {
    Poly2 r;
    for (const auto& [e1, c1] : terms_)
        for (const auto& [e2, c2] : o.terms_) {
            Exp e{e1.first + e2.first, e1.second + e2.second};
            auto it = r.terms_.find(e);
            if (it == r.terms_.end()) {
                Rational c = c1 * c2;
                if (sgn(c) != 0) r.terms_[e] = std::move(c);
            } else {
                it->second += c1 * c2;
                if (sgn(it->second) == 0) r.terms_.erase(it);
            }
        }
    return r;
}

Poly2 Poly2::operator*(const Rational& c) const {
    Poly2 r;
    if (sgn(c) == 0) return r;
    r = *this;
    for (auto& [e, v] : r.terms_) v *= c;
    return r;
}

Poly2 Poly2::pow(int k) const {
    Poly2 r = constant(1);
    for (int i = 0; i < k; ++i) r = r * (*this);
    return r;
}

std::string Poly2::to_string(const std::string& x, const std::string& y) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // highest total degree first, then lexicographic, for readable output
    std::vector<std::pair<Exp, Rational>> ts(terms_.begin(), terms_.end());
    std::sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) {
        int da = a.first.first + a.first.second, db = b.first.first + b.first.second;
        if (da != db) return da > db;
        return a.first > b.first;
    });
    for (const auto& [e, c] : ts) {
        Rational ac = sgn(c) < 0 ? Rational(-c) : c;
        if (!first) os << (sgn(c) < 0 ? " - " : " + ");
        else if (sgn(c) < 0) os << "-";
        first = false;
        bool has_vars = e.first > 0 || e.second > 0;
        if (ac != 1 || !has_vars) {
            os << format_rational(ac);
            if (has_vars) os << "*";
        }
        if (e.first > 0) {
            os << x;
            if (e.first > 1) os << "^" << e.first;
        }
        if (e.second > 0) {
            if (e.first > 0) os << "*";
            os << y;
            if (e.second > 1) os << "^" << e.second;
        }
    }
    return os.str();
}

double poly_eval(const Poly2& f, double x, double y) {
    // group terms by power of x, Horner in x with inner powers of y
    double total = 0.0;
    for (const auto& [e, c] : f.terms())
        total += to_double(c) * std::pow(x, e.first) * std::pow(y, e.second);
    return total;
}

Rational poly_eval_exact(const Poly2& f, const Rational& x, const Rational& y) {
    Rational total = 0;
    for (const auto& [e, c] : f.terms()) {
        Rational t = c;
        for (int i = 0; i < e.first; ++i) t *= x;
        for (int j = 0; j < e.second; ++j) t *= y;
        total += t;
    }
    return total;
}

QuadExt poly_eval_quad(const Poly2& f, const QuadExt& x, const QuadExt& y) {
    QuadExt total;
    for (const auto& [e, c] : f.terms()) {
        QuadExt t = QuadExt::from_rational(c);
        for (int i = 0; i < e.first; ++i) t = t * x;
        for (int j = 0; j < e.second; ++j) t = t * y;
        total = total + t;
    }
    return total;
}

Poly2 poly_diff(const Poly2& f, Var v) {
    Poly2 r;
    for (const auto& [e, c] : f.terms()) {
        if (v == Var::First && e.first > 0)
            r.set_coeff(e.first - 1, e.second, c * Rational(e.first));
        else if (v == Var::Second && e.second > 0)
            r.set_coeff(e.first, e.second - 1, c * Rational(e.second));
    }
    return r;
}

std::pair<int, Poly2> leading_homogeneous_part(const Poly2& f) {
    if (f.is_zero()) throw ZeroPolynomial();
    int m = f.min_degree();
    Poly2 fm;
    for (const auto& [e, c] : f.terms())
        if (e.first + e.second == m) fm.set_coeff(e.first, e.second, c);
    return {m, fm};
}

Poly2 exact_div_by_power(const Poly2& f, Var v, int k) {
    Poly2 r;
    for (const auto& [e, c] : f.terms()) {
        int i = e.first, j = e.second;
        if (v == Var::First) {
            if (i < k) throw NotDivisible("term x^" + std::to_string(i) + "*y^" + std::to_string(j) + " not divisible by x^" + std::to_string(k));
            i -= k;
        } else {
            if (j < k) throw NotDivisible("term x^" + std::to_string(i) + "*y^" + std::to_string(j) + " not divisible by y^" + std::to_string(k));
            j -= k;
        }
        r.set_coeff(i, j, c);
    }
    return r;
}

Poly2 poly_compose_substitute(const Poly2& f, const Poly2& sub_first, const Poly2& sub_second) {
    Poly2 r;
    for (const auto& [e, c] : f.terms())
        r = r + sub_first.pow(e.first) * sub_second.pow(e.second) * c;
    return r;
}

namespace {

struct Lexer {
    std::string s;
    size_t pos = 0;
    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    char get() {
        skip_ws();
        return s[pos++];
    }
};

}  // namespace

Poly2 parse_poly(const std::string& text, const std::string& x, const std::string& y) {
    Lexer lx{text};
    Poly2 result;
    bool expect_term = true;
    int term_sign = 1;
    while (!lx.eof()) {
        char c = lx.peek();
        if (c == '+' || c == '-') {
            lx.get();
            term_sign = (c == '-') ? -term_sign : term_sign;
            expect_term = true;
            continue;
        }
        if (!expect_term) throw ParseError("expected '+' or '-' near position " + std::to_string(lx.pos));
        // one term: factors separated by '*'
        Rational coeff = 1;
        int ei = 0, ej = 0;
        bool any_factor = false;
        while (true) {
            char f = lx.peek();
            if (f == '\0' || f == '+' || f == '-') break;
            if (f == '*') {
                lx.get();
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(f)) || f == '.') {
                std::string num;
                while (!lx.eof() && (std::isdigit(static_cast<unsigned char>(lx.peek())) || lx.peek() == '.' || lx.peek() == '/')) num += lx.get();
                coeff *= parse_rational(num);
                any_factor = true;
                continue;
            }
            // variable name
            std::string name;
            while (!lx.eof() && (std::isalnum(static_cast<unsigned char>(lx.peek())) || lx.peek() == '_')) name += lx.get();
            if (name.empty()) throw ParseError(std::string("unexpected character '") + f + "'");
            int exp = 1;
            if (lx.peek() == '^') {
                lx.get();
                std::string e;
                if (lx.peek() == '-') e += lx.get();
                while (!lx.eof() && std::isdigit(static_cast<unsigned char>(lx.peek()))) e += lx.get();
                if (e.empty()) throw ParseError("missing exponent");
                exp = std::stoi(e);
                if (exp < 0) throw ParseError("negative exponent");
            }
            if (name == x)
                ei += exp;
            else if (name == y)
                ej += exp;
            else
                throw ParseError("unknown variable '" + name + "' (expected '" + x + "' or '" + y + "')");
            any_factor = true;
        }
        if (!any_factor) throw ParseError("empty term");
        result = result + Poly2::monomial(coeff * term_sign, ei, ej);
        term_sign = 1;
        expect_term = false;
    }
    if (expect_term) throw ParseError("dangling sign or empty input");
    return result;
}

std::string PlanarSystem::to_string() const {
    return "d" + var_names.first + "/dt = " + p.to_string(var_names.first, var_names.second) +
           ", d" + var_names.second + "/dt = " + q.to_string(var_names.first, var_names.second);
}

}  // namespace phaseport
