#!/usr/bin/env python3
"""
Sweep hat trees over a range of heights and write one CSV row per h.

    python3 scripts/run_sweep.py --h-min 1 --h-max 6 --out sweep.csv

Any option of `gap_cli sweep` is accepted; global options (--config,
--log-level, --quiet) go before them.
"""
import sys
from pathlib import Path

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from core.gap_cli import main

GLOBAL_FLAGS = {'--config': True, '--log-level': True, '--log-file': True, '--quiet': False}


def split_args(argv):
    """Separate group-level flags from sweep flags"""
    head, tail = [], []
    i = 0
    while i < len(argv):
        flag = argv[i].split('=', 1)[0]
        if flag in GLOBAL_FLAGS:
            takes_value = GLOBAL_FLAGS[flag] and '=' not in argv[i]
            head.extend(argv[i:i + 1 + takes_value])
            i += 1 + takes_value
        else:
            tail.append(argv[i])
            i += 1
    return head, tail


if __name__ == '__main__':
    head, tail = split_args(sys.argv[1:])
    sys.exit(main(head + ['sweep'] + tail))
