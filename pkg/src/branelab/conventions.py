"""Frozen sign and index conventions used by every module.

All formulas in this package are stated against one fixed set of
conventions.  Each convention below was pinned by an explicit numerical
anchor (a closed-form geometry where the signed value is known), and the
anchor is asserted in the test suite; changing any entry here will make
those tests fail loudly rather than silently flipping physics.

Conventions:

* Metric signature on Lorentzian backgrounds: (-, +, ..., +).
* Riemann tensor: R(X,Y)Z = Dx Dy Z - Dy Dx Z - D_[X,Y] Z, components
  R^r_{s m n} = d_m G^r_{n s} - d_n G^r_{m s} + G G - G G, all-lower form
  R_{r s m n} = g_{r k} R^k_{s m n}.  Unit round 2-sphere then has scalar
  curvature +2, and a round n-sphere of radius rho has
  R_{a b m n} = (g_{a m} g_{b n} - g_{a n} g_{b m}) / rho^2.
* Extrinsic curvature K_ab^i = -g(n^i, D_a e_b): the unit 2-sphere in
  euclidean 3-space with the outward normal has mean curvature +2, a
  cylinder of radius r has +1/r.
* Twist (normal-bundle) connection: w_a^{ij} = g(n^i, D_a n^j); the
  covariant derivative of a normal-indexed field adds +w_a^i_j phi^j.
* Curvature pairing used by the deformation and equation-of-motion terms:
  rpair(u, v; w, z) = R_{a b m n} v^a u^b w^m z^n (note the u/v swap).

Deformation identities in these conventions (phi^i a normal deformation):

* delta gamma_ab = +2 K_ab^i phi_i.
* covariant delta K_ab^i = -grad_a grad_b phi^i + K_ac^i K^c_b_j phi^j
  + rpair(e_a, n_j; e_b, n^i) phi^j.

The two constants below carry the signs of the twist-connection response;
they multiply terms that only arise in codimension >= 2 and were anchored
on a codimension-2 surface with generic twist.
"""

# delta w_a^{ij} ~ S_DOMEGA_K * (K_a^{d i} grad_d phi^j - K_a^{d j} grad_d phi^i)
S_DOMEGA_K = +1.0

# delta w_a^{ij} ~ S_DOMEGA_R * rpair(n_k, e_a; n^j, n^i) phi^k
S_DOMEGA_R = +1.0
