//! The frozen sign, ordering and normalization conventions, as printed by the
//! command-line `conventions` subcommand.

pub const TEXT: &str = "\
scalars        exact rationals (arbitrary precision); no floating point anywhere
mode labels    u_(n) is the coefficient of z^(-n-1) in u(z); u_(n) creates iff n < 0
printed index  bosons a, b, c: u_n = u_(n)
               NS fermions: u_r = u_(r - 1/2), r in Z + 1/2
               R psi: psi_k = psi_(k); R phi: phi_k = phi_(k - 1), so phi_0 creates
brackets       [u_(m), v_(n)] = m g(u, v) delta(m + n, 0) for bosons
               {u_(m), v_(n)} = g(u, v) delta(m + n + 1, 0) for fermions
pairings       orthonormal: g(a^i, a^j) = g(phi^i, phi^j) = delta_ij
               polarized: g(b^i, c^j) = g(phi^i, psi^j) = delta_ij, all others zero
monomials      creation modes sorted by (letter phi < psi < a < b < c, index, field index);
               fermionic reordering contributes the sign of the permutation
fields         u1_(-j1-1) ... uk_(-jk-1)|0> <-> :d^(j1)u1 :d^(j2)u2 ... ::, nested to the right,
               d^(j) the divided derivative
normal order   :AB:_(n) = sum_{m<0} A_(m) B_(n-m-1) + (-1)^{|A||B|} sum_{m>=0} B_(n-m-1) A_(m)
N=2 vectors    tau+ = sum b_(-1) psi_(-1), tau- = sum c_(-1) phi_(-1), j = sum psi_(-1) phi_(-1),
               nu = sum b_(-1) c_(-1) + 1/2 phi_(-2) psi_(-1) + 1/2 psi_(-2) phi_(-1)
N=2 products   tau-_(2) tau+ = c/3, tau-_(1) tau+ = -j, tau-_(0) tau+ = nu - 1/2 T j
twists         A: T = nu + 1/2 T j, J = j, Q = tau+, G = tau-
               B: T = nu - 1/2 T j, J = -j, Q = tau-, G = tau+
               inverse for both: nu = T - 1/2 T J
gradings       twice-weight of u_(n), n < 0: bosons -2n; fermions untwisted -2n-1,
               A: psi -2n-2, phi -2n; B: psi -2n, phi -2n-2
               charge: psi +1, phi -1, bosons 0; negated by the B grading
characters     q-exponents counted without the ground prefactor q^(-dim T/16), which is carried separately
";
