#pragma once

#include <hodgeci/rational.hpp>

#include <span>
#include <string>
#include <vector>

namespace hodgeci {

/// Dirichlet integral over the p-simplex {x_i >= 0, sum x_i <= 1}:
/// integral of prod x_i^{alpha_i} (1-sum x)^beta = beta! prod alpha_i! / (beta+sum alpha+p)!.
BigRational simplex_moment(std::span<const unsigned> alpha, unsigned beta, unsigned p);

BigRational binomial(unsigned n, unsigned k);

/// Exact scalar of the form value * (2*pi)^{two_pi_power}.
struct ExactScalar {
    ComplexRational value;
    int two_pi_power = 0;
    Complex numeric() const;
};

/// A derived kernel constant with its full factor trace.
struct OperatorConstant {
    ExactScalar scalar;
    bool structural_zero = false;
    std::vector<std::string> provenance;
    Complex numeric() const { return structural_zero ? Complex(0) : scalar.numeric(); }
};

/// mu-simplex reduction of the L kernel: integral over Delta'_J of
/// omega'_q((1-sum mu) W + sum mu_k V_k) = k * det[W V_1..V_m DZ^q].
/// Derived by formal expansion; exact.
BigRational weil_mu_constant(unsigned n, unsigned m);

/// (lambda,mu)-simplex reduction of the I kernel: integral over Delta_J of
/// omega'_{q-1}((1-lambda-sum mu) W + lambda C + sum mu_k V_k)
/// = k * det[W C V_1..V_m DZ^{q-1} DC^{n-m-q}].
BigRational cwl_lambda_mu_constant(unsigned n, unsigned m, unsigned q);

/// lambda-interval reduction of the Bochner-Martinelli boundary kernel:
/// integral over [0,1] of omega'_q((1-lambda) W + lambda C)
/// = k * det[W C DZ^q DC^{n-1-q}].
BigRational bm_lambda_constant(unsigned n, unsigned q);

/// c_r of the binomial series (1-x)^{-q-1} = sum c_r x^r.
BigRational series_coefficient(unsigned q, unsigned r);

/// External multiplier of the Hodge projector term of index r; the quadrature
/// additionally carries i * (2 pi i)^m from the phase integral and the
/// Coleff-Herrera residue (noted in the provenance). Empty-sum signal when
/// r > d-n-1.
OperatorConstant projector_constant(unsigned n, unsigned m, unsigned d, unsigned r);

/// External multiplier of the solution operator I_q (J = (1..m) term).
OperatorConstant solver_constant(unsigned n, unsigned q, unsigned m);

/// External multiplier of the Bochner-Martinelli boundary operator K_q.
OperatorConstant bm_constant(unsigned n, unsigned q);

} // namespace hodgeci
