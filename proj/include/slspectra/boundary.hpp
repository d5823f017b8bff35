#pragma once

// Boundary-condition families T1..T4 (plus periodic/antiperiodic) and the
// closed-form root functions of the unperturbed (q = 0) operators.

#include <array>
#include <string>
#include <vector>

#include "slspectra/exp_poly.hpp"

namespace slspectra {

enum class Family { T1, T2, T3, T4, Periodic, Antiperiodic };

struct OperatorSpec {
  Family family = Family::T1;
  /// beta for T1/T2, alpha for T3/T4, ignored otherwise.
  cplx parameter{};

  /// Throws ConfigError when the parameter is +-1 for T1..T4.
  void validate() const;
  /// "T1:beta=3+0i", "T3:alpha=0.5", "periodic", "antiperiodic".
  static OperatorSpec parse(const std::string& text);
  std::string to_string() const;
  /// Parameter within 1e-6 of +-1: admissible, but the asymptotic formulas blow up.
  bool near_degenerate() const;
};

std::string family_name(Family f);
/// Parses "3", "-2.5", "3+0i", "2i", "2+i", "1e-3-4.5i".
cplx parse_complex(const std::string& text);

/// T1/T3/Periodic: base eigenvalues (2 pi n)^2. T2/T4/Antiperiodic: ((2n+1) pi)^2.
bool is_even_type(Family f);
/// Frequency index m of the n-th unperturbed harmonic, so that omega = pi*m.
int harmonic_index(Family f, int n);
double base_eigenvalue(Family f, int n);
/// n for T1/T3, 2n+1 for T2/T4: the multiplier of gamma in the coupling term.
int coupling_index(Family f, int n);

/// Boundary functionals as rows over (y(0), y'(0), y(1), y'(1)).
struct BcFunctionals {
  std::array<std::array<cplx, 4>, 2> rows{};
};

BcFunctionals bc_functionals(const OperatorSpec& spec);
/// Conditions of the adjoint problem (same coordinates, applied to z).
BcFunctionals adjoint_bc_functionals(const OperatorSpec& spec);

/// Family constant coupling the eigen and associated directions.
cplx gamma(const OperatorSpec& spec);

/// Asymptotic weight of |u|^2 in the normalization identity:
/// half the squared L2 norm of the polynomial envelope of the scaled associated
/// function. For T1 this is (8/3)(|b|^2 - Re b + 1)/|b - 1|^2.
double normalization_constant(const OperatorSpec& spec);

/// Root functions of the unperturbed operator and its adjoint at index n.
///
/// Pairing used throughout: the expansion of any f in L2 is
///   f = sum_k (f, e_star_k) phi_k + (f, phi_star_k) e_k
/// so (phi_k, e_star_m) = (e_k, phi_star_m) = delta_km and the cross pairings
/// vanish. Members that do not exist at n = 0 are empty (identically zero).
struct UnperturbedSystem {
  Family family;
  int n;
  double base;          ///< unperturbed eigenvalue
  int freq_index;       ///< omega_n = pi * freq_index
  cplx coupling;        ///< gamma * n' (zero at n = 0 for T1/T3)
  bool double_eigenvalue;
  ExpPoly eigenfunction;          ///< y_n
  ExpPoly associated;             ///< phi_n, unscaled (defined for double eigenvalues)
  ExpPoly adjoint_eigenfunction;  ///< y*_n
  ExpPoly e;          ///< eigen-direction basis element
  ExpPoly phi;        ///< scaled associated function
  ExpPoly e_star;     ///< adjoint partner of phi
  ExpPoly phi_star;   ///< adjoint partner of e
};

/// Only for T1..T4; n >= 0.
UnperturbedSystem unperturbed_system(const OperatorSpec& spec, int n);

/// Leading harmonic of the eigenfunctions near base_eigenvalue(n):
/// cos for T1/T2/Periodic/Antiperiodic, sin for T3/T4.
ExpPoly leading_harmonic(Family f, int n);

/// Matrix [(f_i, g_j)] of the biorthogonal pair over all basis elements with
/// index <= n_max. labels[i] = +n for the (e_n, phi_star_n) pair and -n for the
/// (phi_n, e_star_n) pair.
struct BiorthogonalityMatrix {
  std::vector<int> labels;
  std::vector<std::vector<cplx>> entries;
};
BiorthogonalityMatrix biorthogonality_matrix(const OperatorSpec& spec, int n_max);

}  // namespace slspectra
