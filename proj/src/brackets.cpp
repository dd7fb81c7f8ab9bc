#include "ckt/brackets.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace ckt {

namespace {

void check_same_symplectic(const ScalarFunction& F, const ScalarFunction& H)
{
    if (F.arity() != Arity::symplectic || H.arity() != Arity::symplectic)
        throw std::invalid_argument("poisson_bracket requires symplectic-arity functions");
    if (F.n() != H.n())
        throw std::invalid_argument("poisson_bracket: dimension mismatch");
}

void check_same_contact(const ScalarFunction& F, const ScalarFunction& H)
{
    if (F.arity() != Arity::contact || H.arity() != Arity::contact)
        throw std::invalid_argument("contact_bracket requires contact-arity functions");
    if (F.n() != H.n())
        throw std::invalid_argument("contact_bracket: dimension mismatch");
}

} // namespace

double poisson_bracket(const ScalarFunction& F, const ScalarFunction& H,
                       std::span<const double> s)
{
    check_same_symplectic(F, H);
    const std::size_t n = F.n();
    const Vec gF = F.gradient(s);
    const Vec gH = H.gradient(s);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc += gF[i] * gH[n + i] - gF[n + i] * gH[i];
    return acc;
}

double contact_bracket(const ScalarFunction& F, const ScalarFunction& H,
                       std::span<const double> s)
{
    check_same_contact(F, H);
    const std::size_t n = F.n();
    const Vec gF = F.gradient(s);
    const Vec gH = H.gradient(s);
    const double vF = F.value(s);
    const double vH = H.value(s);
    double canonical = 0.0;
    double pdF = 0.0, pdH = 0.0; // p . dF/dp, p . dH/dp
    for (std::size_t i = 0; i < n; ++i) {
        canonical += gF[i] * gH[n + i] - gF[n + i] * gH[i];
        pdF += s[n + i] * gF[n + i];
        pdH += s[n + i] * gH[n + i];
    }
    const double Rf = gF[2 * n];
    const double Rh = gH[2 * n];
    return canonical + (vF - pdF) * Rh - (vH - pdH) * Rf;
}

double bracket(BracketKind kind, const ScalarFunction& F, const ScalarFunction& H,
               std::span<const double> s)
{
    return kind == BracketKind::symplectic ? poisson_bracket(F, H, s) : contact_bracket(F, H, s);
}

ScalarFunction bracket_function(BracketKind kind, const ScalarFunction& F,
                                const ScalarFunction& H)
{
    auto Fp = std::make_shared<ScalarFunction>(F);
    auto Hp = std::make_shared<ScalarFunction>(H);
    return ScalarFunction(F.arity(), F.n(),
                          [kind, Fp, Hp](std::span<const double> s) {
                              return bracket(kind, *Fp, *Hp, s);
                          },
                          nullptr, "{" + F.name() + "," + H.name() + "}");
}

double jacobi_residual(BracketKind kind, const ScalarFunction& F, const ScalarFunction& G,
                       const ScalarFunction& H, std::span<const Vec> states)
{
    if (states.empty())
        throw std::invalid_argument("jacobi_residual requires at least one state");
    const ScalarFunction FG = bracket_function(kind, F, G);
    const ScalarFunction GH = bracket_function(kind, G, H);
    const ScalarFunction HF = bracket_function(kind, H, F);
    double worst = 0.0;
    for (const Vec& s : states) {
        const double r =
            bracket(kind, FG, H, s) + bracket(kind, GH, F, s) + bracket(kind, HF, G, s);
        worst = std::max(worst, std::fabs(r));
    }
    return worst;
}

double leibniz_defect(const ScalarFunction& F, const ScalarFunction& G, const ScalarFunction& H,
                      std::span<const double> s)
{
    check_same_contact(F, G);
    check_same_contact(G, H);
    auto Fp = std::make_shared<ScalarFunction>(F);
    auto Gp = std::make_shared<ScalarFunction>(G);
    const ScalarFunction FG(Arity::contact, F.n(),
                            [Fp, Gp](std::span<const double> x) {
                                return Fp->value(x) * Gp->value(x);
                            },
                            nullptr, "FG");
    const double vF = F.value(s);
    const double vG = G.value(s);
    const double Rh = H.gradient(s).back();
    return contact_bracket(FG, H, s) - vF * contact_bracket(G, H, s) -
           vG * contact_bracket(F, H, s) + vF * vG * Rh;
}

} // namespace ckt
