"""The mchrh command line, driven in-process.

Equivalent shell commands:
  mchrh soliton --theta pi/4 --delta 1 --t 0,1 --x -20:20:401 --out out
  mchrh verify --theta pi/4 --checks pde_y,rh
  mchrh orbit 0.5,1.7
"""
import tempfile

from mchrh.cli import main

with tempfile.TemporaryDirectory() as out:
    print("exit", main(["soliton", "--theta", "pi/4", "--delta", "1", "--t", "0,1", "--x", "-20:20:401", "--out", out]))
    print("exit", main(["soliton", "--theta", "0.4*pi", "--delta", "1", "--x", "-5:5:11", "--out", out]))
print("exit", main(["verify", "--theta", "pi/4", "--checks", "pde_y,rh"]))
print("exit", main(["orbit", "0.5,1.7"]))
