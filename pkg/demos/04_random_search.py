"""
Can random interferometers do better?
=====================================

Brute force over Haar-random unitaries as an audit: the best random
measurement should approach, and never exceed, the QFI that the SLD plan
already reaches.
"""

from qlim import asymmetric_scene, fisher_report, qfi, random_search_cfi

scene = asymmetric_scene()
for theta in (1.0, 2.0, 3.0):
    q = qfi(scene, theta)
    rep = fisher_report(scene, theta)
    for n in (10, 100, 10_000):
        res = random_search_cfi(scene, theta, n, seed=0)
        print(f"theta {theta}  n {n:>6}  best random {res.best_random_cfi:.6f}  "
              f"qfi {q:.6f}  cfi_opt {rep.cfi_opt:.6f}  cfi_qr {rep.cfi_qr:.6f}")
