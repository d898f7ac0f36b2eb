"""Write the seeded demo images used by the README walkthrough.

Outputs a robustness-friendly 64x64 host with its 32x32 logo, plus four
smooth 256x256 hosts and a 128x128 logo for benchmarking.
"""

import argparse
from pathlib import Path

from normalmark.imageio import save_image
from normalmark.synth import blocky_logo, conditioned_host, smooth_u8_image


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="demo_images")
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    out = Path(args.out_dir)
    hosts = out / "hosts"
    hosts.mkdir(parents=True, exist_ok=True)

    save_image(str(out / "host64.pgm"), conditioned_host(64, seed=args.seed))
    save_image(str(out / "logo32.pgm"), blocky_logo(32, seed=args.seed))
    save_image(str(out / "logo128.pgm"), blocky_logo(128, seed=args.seed + 1))
    for k in range(4):
        save_image(
            str(hosts / f"smooth{k}.pgm"),
            smooth_u8_image(256, 256, 10 * args.seed + k),
        )
    print(f"wrote host64/logo32/logo128 and 4 bench hosts under {out}/")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
