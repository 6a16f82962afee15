"""Sweep one design parameter and summarize like a box plot would.

Runs the ERB-band canceller over several seeded scenes per value and prints
the median and quartiles of the band-weighted SNR. The same sweeps are
available from the command line, e.g.

    solocancel sweep --param subbands --values 10,20,39,78 --num-scenes 4 \
        --duration 5 --out subbands.csv
"""
import numpy as np

import solocancel as sc

fs = 44100
num_scenes = 4
values = (10, 20, 39, 78)

print(f"{'subbands':>9} {'median':>8} {'q25':>8} {'q75':>8}")
for num_bands in values:
    scores = []
    for seed in range(num_scenes):
        scene = sc.synth_siso(
            sc.SceneConfig(
                solo=sc.noise_plus_tones(5.0, fs, seed=seed),
                accompaniment_reference=sc.broadband_accompaniment(5.0, fs, seed=seed),
                mic_ir=sc.make_mic_ir(13.7, 606, seed=seed),
                channel_delay=32,
                level_diff_db=6.02,
            )
        )
        estimate = sc.sbw_cancel(
            scene.mixture, scene.reference, sc.SbwConfig(num_bands=num_bands)
        )
        scores.append(sc.snrf(estimate, scene.reference_solo))
    med = np.median(scores)
    q25, q75 = np.percentile(scores, [25, 75])
    print(f"{num_bands:>9} {med:>8.2f} {q25:>8.2f} {q75:>8.2f}")
