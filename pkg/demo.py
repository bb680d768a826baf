# demo.py: frame operator round trip for a random-periodic point set
import numpy as np

from zakframe import (PointSet, SignalGrid, assemble_constants, certify_frame, frame_operator_apply,
                      parse_window, reconstruct)
from zakframe.frame import relative_error
from settings import M, NT, SEED, SIGNAL_L, WINDOW

if __name__ == "__main__":
    spec = parse_window(WINDOW)
    pts = PointSet.sampled(M, SEED)
    wc = assemble_constants(spec)
    cert = certify_frame(spec, pts, wc)
    print(f"{spec.label}: m={pts.m} verdict={cert.verdict} A={cert.A_cert:.4g} B={cert.B_cert:.4g}")

    rng = np.random.Generator(np.random.Philox(key=SEED))
    f = SignalGrid(rng.standard_normal(2 * SIGNAL_L * NT), NT, SIGNAL_L)
    rec = reconstruct(frame_operator_apply(f, spec, pts), spec, pts, wc)
    print(f"relative reconstruction error: {relative_error(rec, f):.3e}")
