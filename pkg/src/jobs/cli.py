"""
Umbrella command: `aep <subcommand> [options]`.

    aep simulate --side 64
    aep pde --config runs/heat.yaml
    aep selfdiff --replicas 1000
    aep compare --sides 32 64 96
    aep exactcheck

Exit code 0 only if every in-run assertion passed, 1 if one failed,
2 on a configuration or grid error.
"""

import argparse
import sys
from typing import Callable, Dict, Optional, Sequence

from . import compare, exactcheck, pde, selfdiff
from .simulate import main as simulate_main

COMMANDS: Dict[str, Callable[[Optional[Sequence[str]]], int]] = {
    "simulate": simulate_main,
    "pde": pde.main,
    "selfdiff": selfdiff.main,
    "compare": compare.main,
    "exactcheck": exactcheck.main,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = argparse.ArgumentParser(prog="aep", description="Active exclusion process toolkit")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("args", nargs=argparse.REMAINDER)
    ns = parser.parse_args(argv[:1])
    return COMMANDS[ns.command](argv[1:])


if __name__ == "__main__":
    raise SystemExit(main())
