#include "ckt/polynomial.hpp"

#include <cctype>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace ckt {

Polynomial::Polynomial(std::size_t nvars) : nvars_(nvars)
{
    if (nvars_ == 0)
        throw std::invalid_argument("Polynomial requires at least one variable");
}

void Polynomial::add_term(double coef, std::vector<unsigned> exps)
{
    if (exps.size() != nvars_)
        throw std::invalid_argument("Polynomial term exponent count mismatch");
    if (coef == 0.0)
        return;
    // merge with an existing monomial if present
    for (Term& t : terms_) {
        if (t.exps == exps) {
            t.coef += coef;
            return;
        }
    }
    terms_.push_back({coef, std::move(exps)});
}

double Polynomial::value(std::span<const double> x) const
{
    if (x.size() != nvars_)
        throw std::invalid_argument("Polynomial: argument dimension mismatch");
    double acc = 0.0;
    for (const Term& t : terms_) {
        double m = t.coef;
        for (std::size_t v = 0; v < nvars_; ++v)
            for (unsigned k = 0; k < t.exps[v]; ++k)
                m *= x[v];
        acc += m;
    }
    return acc;
}

double Polynomial::partial(std::size_t var, std::span<const double> x) const
{
    if (x.size() != nvars_)
        throw std::invalid_argument("Polynomial: argument dimension mismatch");
    double acc = 0.0;
    for (const Term& t : terms_) {
        const unsigned e = t.exps[var];
        if (e == 0)
            continue;
        double m = t.coef * e;
        for (std::size_t v = 0; v < nvars_; ++v) {
            const unsigned reps = (v == var) ? t.exps[v] - 1 : t.exps[v];
            for (unsigned k = 0; k < reps; ++k)
                m *= x[v];
        }
        acc += m;
    }
    return acc;
}

Polynomial Polynomial::derivative(std::size_t var) const
{
    Polynomial d(nvars_);
    for (const Term& t : terms_) {
        if (t.exps[var] == 0)
            continue;
        auto exps = t.exps;
        const unsigned e = exps[var]--;
        d.add_term(t.coef * e, std::move(exps));
    }
    return d;
}

Polynomial Polynomial::multiplied(const Polynomial& other) const
{
    if (other.nvars_ != nvars_)
        throw std::invalid_argument("Polynomial::multiplied: variable count mismatch");
    Polynomial out(nvars_);
    for (const Term& a : terms_)
        for (const Term& b : other.terms_) {
            std::vector<unsigned> exps(nvars_);
            for (std::size_t v = 0; v < nvars_; ++v)
                exps[v] = a.exps[v] + b.exps[v];
            out.add_term(a.coef * b.coef, std::move(exps));
        }
    return out;
}

void Polynomial::add_scaled(const Polynomial& other, double scale)
{
    if (other.nvars_ != nvars_)
        throw std::invalid_argument("Polynomial::add_scaled: variable count mismatch");
    for (const Term& t : other.terms_)
        add_term(scale * t.coef, t.exps);
}

std::string Polynomial::to_string(std::span<const std::string> vars) const
{
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const Term& t : terms_) {
        if (!first)
            os << (t.coef < 0 ? " - " : " + ");
        else if (t.coef < 0)
            os << "-";
        first = false;
        os << std::fabs(t.coef);
        for (std::size_t v = 0; v < nvars_; ++v) {
            if (t.exps[v] == 0)
                continue;
            os << "*" << vars[v];
            if (t.exps[v] > 1)
                os << "^" << t.exps[v];
        }
    }
    return os.str();
}

namespace {

struct Tokenizer {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws()
    {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    }
    bool done()
    {
        skip_ws();
        return pos >= text.size();
    }
    char peek()
    {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
};

[[noreturn]] void parse_fail(std::string_view text, std::size_t pos, const std::string& what)
{
    std::ostringstream os;
    os << "polynomial parse error at position " << pos << ": " << what << " in '" << text << "'";
    throw std::invalid_argument(os.str());
}

} // namespace

Polynomial Polynomial::parse(std::string_view text, std::span<const std::string> vars)
{
    Polynomial out(vars.size());
    Tokenizer tk{text};
    if (tk.done())
        parse_fail(text, 0, "empty expression");

    while (!tk.done()) {
        double sign = 1.0;
        while (tk.peek() == '+' || tk.peek() == '-') {
            if (tk.peek() == '-')
                sign = -sign;
            ++tk.pos;
        }
        double coef = sign;
        std::vector<unsigned> exps(vars.size(), 0);
        bool saw_factor = false;

        while (true) {
            tk.skip_ws();
            if (tk.pos < text.size() && text[tk.pos] == '*') {
                ++tk.pos;
                tk.skip_ws();
            }
            if (tk.pos >= text.size())
                break;
            const char c = text[tk.pos];
            if (c == '+' || c == '-')
                break;
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                std::size_t used = 0;
                const std::string rest(text.substr(tk.pos));
                double v = 0;
                try {
                    v = std::stod(rest, &used);
                } catch (const std::exception&) {
                    parse_fail(text, tk.pos, "bad number");
                }
                coef *= v;
                tk.pos += used;
                saw_factor = true;
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c))) {
                std::size_t end = tk.pos;
                while (end < text.size() && (std::isalnum(static_cast<unsigned char>(text[end]))))
                    ++end;
                const std::string name(text.substr(tk.pos, end - tk.pos));
                std::size_t var = vars.size();
                for (std::size_t v = 0; v < vars.size(); ++v)
                    if (vars[v] == name)
                        var = v;
                if (var == vars.size())
                    parse_fail(text, tk.pos, "unknown variable '" + name + "'");
                tk.pos = end;
                unsigned exp = 1;
                tk.skip_ws();
                if (tk.pos < text.size() && text[tk.pos] == '^') {
                    ++tk.pos;
                    tk.skip_ws();
                    std::size_t used = 0;
                    const std::string rest(text.substr(tk.pos));
                    int e = 0;
                    try {
                        e = std::stoi(rest, &used);
                    } catch (const std::exception&) {
                        parse_fail(text, tk.pos, "bad exponent");
                    }
                    if (e < 0)
                        parse_fail(text, tk.pos, "negative exponent");
                    exp = static_cast<unsigned>(e);
                    tk.pos += used;
                }
                exps[var] += exp;
                saw_factor = true;
                continue;
            }
            parse_fail(text, tk.pos, std::string("unexpected character '") + c + "'");
        }
        if (!saw_factor)
            parse_fail(text, tk.pos, "term with no factors");
        out.add_term(coef, std::move(exps));
    }
    return out;
}

Polynomial random_polynomial(std::size_t nvars, unsigned max_degree, std::mt19937_64& rng)
{
    Polynomial out(nvars);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::vector<unsigned> exps(nvars, 0);
    // enumerate exponent tuples with total degree <= max_degree
    auto rec = [&](auto&& self, std::size_t var, unsigned budget) -> void {
        if (var == nvars) {
            out.add_term(coef(rng), exps);
            return;
        }
        for (unsigned e = 0; e <= budget; ++e) {
            exps[var] = e;
            self(self, var + 1, budget - e);
        }
        exps[var] = 0;
    };
    rec(rec, 0, max_degree);
    return out;
}

ScalarFunction to_scalar_function(Arity arity, std::size_t n, Polynomial poly, std::string name)
{
    const std::size_t dim = flat_dim(arity, n);
    if (poly.nvars() != dim)
        throw std::invalid_argument("polynomial variable count does not match arity");
    auto p = std::make_shared<Polynomial>(std::move(poly));
    auto grads = std::make_shared<std::vector<Polynomial>>();
    grads->reserve(dim);
    for (std::size_t v = 0; v < dim; ++v)
        grads->push_back(p->derivative(v));
    return ScalarFunction(
        arity, n, [p](std::span<const double> x) { return p->value(x); },
        [grads](std::span<const double> x, std::span<double> out) {
            for (std::size_t v = 0; v < out.size(); ++v)
                out[v] = (*grads)[v].value(x);
        },
        std::move(name));
}

} // namespace ckt
