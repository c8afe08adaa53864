"""
Optional smoke run on a real heart-sound corpus
===============================================

The PhysioNet/CinC 2016 heart-sound corpus is not bundled.  If you have a
local copy, lay out (or symlink) a directory containing mono PCM16 WAV
files plus a labels.csv manifest:

    filename,label
    a0001.wav,pathological
    a0002.wav,healthy
    ...

and run this script with that directory as the only argument.  It runs a
small non-gating grid (Gaussian window, nominal length 30, 30 hidden
units) and prints the mean metrics.  Published kNN-baseline accuracies on
such data fall in the 74.07-81.40 range, which is useful context; exact
replication of any published figure is NOT expected, because subset
selection and split seeds are not public.
"""

import sys

from pcgkit.cli import main

if len(sys.argv) != 2:
    sys.exit("usage: python 05_real_corpus_smoke.py <corpus_dir>")

corpus = sys.argv[1]
code = main([
    "grid",
    "--corpus", corpus,
    "--shapes", "gaussian",
    "--lengths", "30",
    "--hidden", "30",
    "--trials", "3",
    "--hop", "25",
    "--epochs", "100",
    "--seed", "0",
    "--out-dir", f"{corpus.rstrip('/')}_smoke_results",
])
sys.exit(code)
