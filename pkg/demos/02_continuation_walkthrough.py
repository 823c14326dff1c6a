"""The analytic-continuation pipeline on the quintic, step by step.

1. build the hypergeometric series I^X on the quotient-stack side,
2. peel off the Gamma class (verifying the factorization exactly),
3. push the H-function through the continuation operator,
4. compare against the closed-form continued series termwise.

Run:  python demos/02_continuation_walkthrough.py
"""
from lgcy import Orders, h_continued, h_factorization, i_function_x, u_bar
from lgcy.catalog import quintic


def main():
    pair = quintic()
    orders = Orders(t_order=7, lam_order=5)

    ix = i_function_x(pair, orders)
    print(f"I^X at T={orders.t_order}, lam-order={orders.lam_order}: "
          f"{len(ix.terms)} stored coefficients, tokens {ix.tokens}")
    sample = ix.coefficient((2,) * 5, -6, (7, 0))
    print(f"  t^7 coefficient at z^-6 (top of (-lam - 2/5 z)^5 / 7!): {sample}")

    gamma_op, hx = h_factorization(pair, ix, "x")
    print(f"factorization verified; H^X has {len(hx.terms)} coefficients")
    h_sample = hx.coefficient((2,) * 5, 0, (7, 0))
    print(f"  H^X t^7 coefficient (pure Gamma atoms): {h_sample}")

    pushed = u_bar(pair, orders.lam_order).apply(hx)
    continued = h_continued(pair, orders)
    witness = pushed.compare(continued)
    print(f"Ubar(H^X) vs H^Y': {'equal termwise' if witness is None else witness}")
    key = sorted(continued.terms)[1]
    print(f"  sample continued coefficient at {key}:")
    print(f"    {continued.terms[key]}")


if __name__ == "__main__":
    main()
