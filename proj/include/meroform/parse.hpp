#pragma once

#include <cctype>
#include <complex>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "mero_form.hpp"
#include "poly.hpp"

namespace meroform {

// A smooth point on a pole component for the contour oracle, with an
// optional transversal direction (default: the conjugate gradient).
struct OraclePoint {
    std::vector<std::complex<double>> coords;
    std::optional<std::vector<std::complex<double>>> transversal;
};

// One problem per file:
//   vars: x y
//   eta: (2*x) dx + (3*y^2) dy
//   poles: (x^2 + y^3)^1
//   point: (1,0 -1,0)            # optional, repeatable
//   transversal: (0,0 1,0)       # optional, attaches to the point above
//   expected_lambdas: 1          # optional, for golden tests
//   expected_g: 0                # optional
struct ProblemFile {
    std::vector<std::string> vars;
    OneForm eta = OneForm(1);
    PoleDivisor divisor;
    std::vector<OraclePoint> points;
    std::optional<std::vector<Rational>> expected_lambdas;
    std::optional<Poly> expected_g;

    MeroOneForm form() const { return MeroOneForm{eta, divisor}; }
};

namespace detail {

// Single-line recursive-descent parser for the expression grammar:
//   expr    := term (('+'|'-') term)*
//   term    := unary ('*' unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' uint)?
//   primary := '(' expr ')' | number | ident
//   number  := uint ('/' uint)?     (rationals only as literals)
// Implicit multiplication is not allowed.
class LineParser {
public:
    LineParser(const std::string& text, int line_no) : s_(text), line_(line_no) {}

    void skip_ws()
    {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t'))
            ++pos_;
    }

    bool at_end()
    {
        skip_ws();
        return pos_ >= s_.size();
    }

    [[noreturn]] void fail(const std::string& msg) const
    {
        throw parse_error(line_, static_cast<int>(pos_) + 1, msg);
    }

    char peek()
    {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    bool consume(char c)
    {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const std::string& what)
    {
        if (!consume(c))
            fail("expected '" + std::string(1, c) + "' " + what);
    }

    std::string ident()
    {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                    s_[pos_] == '_'))
            ++pos_;
        if (start == pos_ || std::isdigit(static_cast<unsigned char>(s_[start])))
            fail("expected an identifier");
        return s_.substr(start, pos_ - start);
    }

    Integer uint_literal()
    {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        if (start == pos_)
            fail("expected an integer");
        return Integer(s_.substr(start, pos_ - start));
    }

    double float_literal()
    {
        skip_ws();
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin)
            fail("expected a number");
        pos_ += end - begin;
        return v;
    }

    Poly expr(const std::vector<std::string>& vars)
    {
        Poly acc = term(vars);
        for (;;) {
            if (consume('+'))
                acc += term(vars);
            else if (consume('-'))
                acc -= term(vars);
            else
                return acc;
        }
    }

private:
    Poly term(const std::vector<std::string>& vars)
    {
        Poly acc = unary(vars);
        while (consume('*'))
            acc = acc * unary(vars);
        return acc;
    }

    Poly unary(const std::vector<std::string>& vars)
    {
        if (consume('-'))
            return -unary(vars);
        return power(vars);
    }

    Poly power(const std::vector<std::string>& vars)
    {
        Poly base = primary(vars);
        if (consume('^')) {
            Integer e = uint_literal();
            if (e > 64)
                fail("exponent too large");
            return base.pow(e.convert_to<int>());
        }
        return base;
    }

    Poly primary(const std::vector<std::string>& vars)
    {
        int n = static_cast<int>(vars.size());
        char c = peek();
        if (c == '(') {
            ++pos_;
            Poly inner = expr(vars);
            expect(')', "to close the parenthesis");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Integer num = uint_literal();
            if (consume('/')) {
                Integer den = uint_literal();
                if (den == 0)
                    fail("zero denominator in rational literal");
                return Poly::constant(n, Rational(num, den));
            }
            return Poly::constant(n, Rational(num));
        }
        std::string name = ident();
        for (int i = 0; i < n; ++i)
            if (vars[i] == name)
                return Poly::variable(n, i);
        fail("unknown variable " + name);
    }

    const std::string& s_;
    std::size_t pos_ = 0;
    int line_;
};

inline std::vector<std::complex<double>> complex_tuple(LineParser& lp, int nvars)
{
    lp.expect('(', "to open the coordinate tuple");
    std::vector<std::complex<double>> out;
    for (int i = 0; i < nvars; ++i) {
        double re = lp.float_literal();
        lp.expect(',', "between the real and imaginary parts");
        double im = lp.float_literal();
        out.emplace_back(re, im);
    }
    lp.expect(')', "to close the coordinate tuple");
    if (!lp.at_end())
        lp.fail("trailing characters after the coordinate tuple");
    return out;
}

} // namespace detail

inline ProblemFile parse_problem(const std::string& text)
{
    std::vector<std::pair<int, std::string>> lines;
    {
        std::istringstream in(text);
        std::string line;
        int no = 0;
        while (std::getline(in, line)) {
            ++no;
            if (!line.empty() && line.back() == '\r')
                line.pop_back(); // CRLF input
            auto hash = line.find('#');
            if (hash != std::string::npos)
                line.resize(hash);
            bool blank = true;
            for (char c : line)
                if (c != ' ' && c != '\t') {
                    blank = false;
                    break;
                }
            if (!blank)
                lines.emplace_back(no, line);
        }
    }

    ProblemFile pf;
    bool have_vars = false, have_eta = false, have_poles = false;
    std::string eta_text;
    int eta_line = 0;

    for (auto& [no, raw] : lines) {
        auto colon = raw.find(':');
        if (colon == std::string::npos)
            throw parse_error(no, 1, "expected 'key: value'");
        std::string key = raw.substr(0, colon);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t'))
            key.pop_back();
        std::size_t key_start = 0;
        while (key_start < key.size() && (key[key_start] == ' ' || key[key_start] == '\t'))
            ++key_start;
        key = key.substr(key_start);
        std::string value = raw.substr(colon + 1);
        detail::LineParser lp(value, no);

        if (key == "vars") {
            if (have_vars)
                throw parse_error(no, 1, "duplicate vars line");
            while (!lp.at_end()) {
                std::string v = lp.ident();
                for (const auto& seen : pf.vars)
                    if (seen == v)
                        lp.fail("duplicate variable " + v);
                pf.vars.push_back(v);
            }
            if (pf.vars.empty())
                lp.fail("at least one variable required");
            have_vars = true;
        } else if (key == "eta") {
            if (have_eta)
                throw parse_error(no, 1, "duplicate eta line");
            eta_text = value; // parsed after vars are known
            eta_line = no;
            have_eta = true;
        } else if (key == "poles") {
            if (have_poles)
                throw parse_error(no, 1, "duplicate poles line");
            if (!have_vars)
                throw parse_error(no, 1, "vars must come before poles");
            std::vector<DivisorComponent> comps;
            for (;;) {
                lp.expect('(', "to open a pole component");
                Poly f = lp.expr(pf.vars);
                lp.expect(')', "to close the pole component");
                lp.expect('^', "before the pole multiplicity");
                Integer mult = lp.uint_literal();
                if (mult < 1)
                    lp.fail("multiplicity must be >= 1");
                if (f.is_zero())
                    lp.fail("pole component is the zero polynomial");
                if (f.constant_term() != 0)
                    lp.fail("pole component must vanish at the origin (unit component)");
                comps.push_back({f, mult.convert_to<int>()});
                if (!lp.consume(','))
                    break;
            }
            if (!lp.at_end())
                lp.fail("trailing characters after the pole list");
            pf.divisor = PoleDivisor(std::move(comps));
            have_poles = true;
        } else if (key == "point") {
            if (!have_vars)
                throw parse_error(no, 1, "vars must come before point");
            OraclePoint pt;
            pt.coords = detail::complex_tuple(lp, static_cast<int>(pf.vars.size()));
            pf.points.push_back(std::move(pt));
        } else if (key == "transversal") {
            if (pf.points.empty())
                throw parse_error(no, 1, "transversal must follow a point line");
            if (pf.points.back().transversal)
                throw parse_error(no, 1, "point already has a transversal");
            pf.points.back().transversal =
                detail::complex_tuple(lp, static_cast<int>(pf.vars.size()));
        } else if (key == "expected_lambdas") {
            std::vector<Rational> ls;
            for (;;) {
                bool neg = lp.consume('-');
                Integer num = lp.uint_literal();
                Integer den(1);
                if (lp.consume('/'))
                    den = lp.uint_literal();
                if (den == 0)
                    lp.fail("zero denominator");
                Rational q(num, den);
                ls.push_back(neg ? -q : q);
                if (!lp.consume(','))
                    break;
            }
            if (!lp.at_end())
                lp.fail("trailing characters after expected_lambdas");
            pf.expected_lambdas = std::move(ls);
        } else if (key == "expected_g") {
            if (!have_vars)
                throw parse_error(no, 1, "vars must come before expected_g");
            pf.expected_g = lp.expr(pf.vars);
            if (!lp.at_end())
                lp.fail("trailing characters after expected_g");
        } else {
            throw parse_error(no, 1, "unknown field '" + key + "'");
        }
    }

    if (!have_vars)
        throw parse_error(1, 1, "missing vars line");
    if (!have_eta)
        throw parse_error(1, 1, "missing eta line");
    if (!have_poles)
        throw parse_error(1, 1, "missing poles line");

    // eta: [sign] (expr) d<var> (('+'|'-') (expr) d<var>)*
    int n = static_cast<int>(pf.vars.size());
    detail::LineParser lp(eta_text, eta_line);
    OneForm eta(n);
    bool first = true;
    for (;;) {
        Rational sign(1);
        if (lp.consume('-'))
            sign = -1;
        else if (lp.consume('+')) {
            if (first)
                lp.fail("leading '+' is not allowed");
        } else if (!first) {
            lp.fail("expected '+' or '-' between eta terms");
        }
        lp.expect('(', "to open an eta coefficient");
        Poly c = lp.expr(pf.vars);
        lp.expect(')', "to close the eta coefficient");
        std::string d = lp.ident();
        if (d.size() < 2 || d[0] != 'd')
            lp.fail("expected a differential like dx after the coefficient");
        std::string var = d.substr(1);
        int idx = -1;
        for (int i = 0; i < n; ++i)
            if (pf.vars[i] == var)
                idx = i;
        if (idx < 0)
            lp.fail("unknown variable " + var + " in differential " + d);
        eta.set_coeff(idx, eta.coeff(idx) + c * sign);
        first = false;
        if (lp.at_end())
            break;
    }
    pf.eta = eta;

    if (pf.expected_lambdas &&
        static_cast<int>(pf.expected_lambdas->size()) != pf.divisor.count())
        throw parse_error(eta_line, 1, "expected_lambdas length does not match the pole count");
    return pf;
}

// Canonical rendering; parse(render(parse(text))) == parse(text).
inline std::string render_problem(const ProblemFile& pf)
{
    std::ostringstream out;
    out << "vars:";
    for (const auto& v : pf.vars)
        out << " " << v;
    out << "\n";

    out << "eta: ";
    bool first = true;
    for (int k = 0; k < static_cast<int>(pf.vars.size()); ++k) {
        if (pf.eta.coeff(k).is_zero())
            continue;
        if (!first)
            out << " + ";
        out << "(" << pf.eta.coeff(k).to_string(pf.vars) << ") d" << pf.vars[k];
        first = false;
    }
    if (first)
        out << "(0) d" << pf.vars[0];
    out << "\n";

    out << "poles: ";
    for (int i = 0; i < pf.divisor.count(); ++i) {
        if (i)
            out << ", ";
        out << "(" << pf.divisor.component(i).f.to_string(pf.vars) << ")^"
            << pf.divisor.component(i).multiplicity;
    }
    out << "\n";

    if (pf.expected_lambdas) {
        out << "expected_lambdas: ";
        for (std::size_t i = 0; i < pf.expected_lambdas->size(); ++i) {
            if (i)
                out << ", ";
            out << (*pf.expected_lambdas)[i];
        }
        out << "\n";
    }
    if (pf.expected_g)
        out << "expected_g: " << pf.expected_g->to_string(pf.vars) << "\n";

    auto tuple = [&out](const std::vector<std::complex<double>>& cs) {
        out << "(";
        for (std::size_t i = 0; i < cs.size(); ++i) {
            if (i)
                out << " ";
            out.precision(17);
            out << cs[i].real() << "," << cs[i].imag();
        }
        out << ")";
    };
    for (const auto& pt : pf.points) {
        out << "point: ";
        tuple(pt.coords);
        out << "\n";
        if (pt.transversal) {
            out << "transversal: ";
            tuple(*pt.transversal);
            out << "\n";
        }
    }
    return out.str();
}

} // namespace meroform
