"""Default limits. Every public routine that enumerates takes an explicit
override, so these are starting points rather than hard constants."""

ORDER_CAP = 65536
# evaluations of an iterated difference over A^(k+1)
EVAL_CAP = 10**8
# largest group for which the |A| x |A| addition table is materialized
TABLE_CAP = 2048
# chunk size (elements) for vectorized enumeration
CHUNK = 1 << 20
