"""Rank sequences of a poset element and their equality cases.

N_i counts linear extensions that put x in position i.  The sequence is
log-concave, and the equality cases are read off the poset combinatorially.

Run: python3 demos/stanley_sequences.py
"""

from afx.stanley import exst_equivalence_audit, parse_poset, rank_sequence, stanley_representation_check

TEXT = """\
# y1 < x < z1 and y1 < w1 < w2 < z1
y1 *x z1 w1 w2
y1 < x
x < z1
y1 < w1
w1 < w2
w2 < z1
"""

P = parse_poset(TEXT)
seq = rank_sequence(P)
print("N =", seq.counts, "| log-concave:", seq.log_concave())

audit = exst_equivalence_audit(P)
print(" i   N_i^2=N_(i-1)N_(i+1)   (b)   (c)   (d)")
for row in audit.rows:
    print(f"{row.i:2}   {str(row.a):20}   {str(row.b):5} {str(row.c):5} {str(row.d):5}")
print("disagreements:", audit.disagreements or "none")
print("N_i as mixed volumes of order polytopes:", stanley_representation_check(P))
