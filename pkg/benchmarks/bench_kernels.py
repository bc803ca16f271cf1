"""Compare the pure-Python and compiled kernels.

Usage: python benchmarks/bench_kernels.py [repeat]
"""

import sys

from indsetlab.harness.bench import bench, format_table

if __name__ == "__main__":
    repeat = int(sys.argv[1]) if len(sys.argv) > 1 else 20
    print(format_table(bench(repeat)))
