#!/usr/bin/env python3
"""End-to-end checks of the verlinde CLI: examples, schema, exit codes, cache round-trip, golden table."""

import json
import os
import subprocess
import sys
import tempfile
import unittest

import jsonschema

BIN = os.environ.get("VERLINDE_BIN", "verlinde")
ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
with open(os.path.join(ROOT, "docs", "cli-schema.json")) as fh:
    SCHEMA = json.load(fh)
GOLDEN = os.path.join(ROOT, "tests", "fixtures", "table.json")


def run(*args, env=None):
    return subprocess.run([BIN, *args], capture_output=True, text=True, env=env, timeout=600)


def out(*args, env=None, code=0):
    p = run(*args, env=env)
    assert p.returncode == code, f"{args}: exit {p.returncode}, stderr {p.stderr}"
    return json.loads(p.stdout)


def validate(cmd, doc):
    schema = dict(SCHEMA["commands"][cmd])
    schema["$defs"] = SCHEMA["$defs"]
    jsonschema.Draft202012Validator(schema).validate(doc)


class Examples(unittest.TestCase):
    def test_fuse_su2(self):
        self.assertEqual(out("fuse", "--rank", "1", "--level", "2", "--lambda", "1,1", "--mu", "1,1"), {"0,2": 1, "2,0": 1})

    def test_nz_census(self):
        d = out("nz-census", "--rank", "3", "--level", "8", "-d", "2")
        self.assertEqual((d["nz"], d["ality_pass"], d["total"]), (75, 85, 165))

    def test_rank(self):
        self.assertEqual(out("rank", "--rank", "4", "--level", "7")["rank"], 2)

    def test_no_zeroth(self):
        a = out("fuse", "-r", "2", "-k", "2", "--lambda", "1,1,0", "--mu", "1,0,1")
        b = out("--no-zeroth", "fuse", "-r", "2", "-k", "2", "--lambda", "1,0", "--mu", "0,1")
        self.assertEqual(a, b)

    def test_weight_expressions(self):
        a = out("chi", "-r", "3", "-k", "2", "--lambda", "w1+w3", "--mu", "0,1,0,1")
        self.assertEqual(a["lambda"], [0, 1, 0, 1])


class Schema(unittest.TestCase):
    CASES = [
        ("enumerate", ["-r", "2", "-k", "3"]),
        ("chi", ["-r", "2", "-k", "2", "--lambda", "w1", "--mu", "0,1,1"]),
        ("smatrix", ["-r", "2", "-k", "2"]),
        ("fuse", ["-r", "2", "-k", "3", "--lambda", "w1", "--mu", "w2"]),
        ("rank", ["-r", "3", "-k", "4"]),
        ("generators", ["-r", "3", "-k", "4", "--gamma", "w1;w2"]),
        ("invertible", ["-r", "3", "-k", "4"]),
        ("scan-invertible", ["--max-rank", "2", "--max-level", "3"]),
        ("factorize", ["-r", "3", "-k", "4", "--lambda", "w2", "-d", "2"]),
        ("nz-census", ["-r", "3", "-k", "4", "-d", "2"]),
        ("zero-construct", ["-r", "10", "-k", "19", "--primes", "3,5", "--mult", "2,1"]),
        ("galois", ["-r", "4", "-k", "4", "--ell", "7", "--orbit", "1"]),
        ("fields", ["-r", "3", "-k", "4"]),
        ("table-repro", ["--max-rank", "2", "--max-level", "3"]),
    ]

    def test_outputs_validate_and_round_trip(self):
        with tempfile.TemporaryDirectory() as tmp:
            env = dict(os.environ, FUSION_CACHE_DIR=tmp)
            for cmd, args in self.CASES:
                with self.subTest(cmd=cmd):
                    doc = out(cmd, *args, env=env)
                    validate(cmd, doc)
                    self.assertEqual(json.loads(json.dumps(doc)), doc)

    def test_zero_claims_are_certified(self):
        z = out("zero-construct", "-r", "10", "-k", "19", "--primes", "3,5", "--mult", "2,1")
        self.assertEqual(z["labels"], [26, 25, 20, 19, 16, 13, 10, 7, 6, 1, 0])
        self.assertTrue(z["zero_certified"])
        self.assertEqual(z["certified"], "exact")
        inv = out("invertible", "-r", "3", "-k", "4")
        self.assertEqual(inv["certified"], "exact")
        self.assertEqual(out("chi", "-r", "2", "-k", "1", "--lambda", "w1", "--mu", "0")["value"]["certified"], "exact")

    def test_galois_record(self):
        d = out("galois", "-r", "2", "-k", "3", "--ell", "5")
        n = len(d["weights"])
        self.assertEqual(sorted(d["action"]["permutation"]), list(range(n)))
        self.assertEqual(len(d["action"]["parity_vector"]), n)
        f = out("fields", "-r", "5", "-k", "3")
        self.assertEqual(f["K_descriptor"], "Q_54[sqrt2]")
        self.assertTrue(f["L_full"])


class Stability(unittest.TestCase):
    def test_enumeration_stable(self):
        self.assertEqual(out("enumerate", "-r", "3", "-k", "5"), out("enumerate", "-r", "3", "-k", "5"))

    def test_cache_reload(self):
        with tempfile.TemporaryDirectory() as tmp:
            env = dict(os.environ, FUSION_CACHE_DIR=tmp)
            first = out("smatrix", "-r", "2", "-k", "3", env=env)
            second = out("smatrix", "-r", "2", "-k", "3", env=env)
            self.assertFalse(first["from_cache"])
            self.assertTrue(second["from_cache"])
            self.assertEqual(first["weights"], second["weights"])
            worst = max(abs(a - b) for ra, rb in zip(first["s"], second["s"]) for za, zb in zip(ra, rb) for a, b in zip(za, zb))
            self.assertLess(worst, 1e-15)
            other = out("--cache-dir", os.path.join(tmp, "x"), "smatrix", "-r", "2", "-k", "3", env=env)
            self.assertFalse(other["from_cache"])

    def test_journal_resume(self):
        with tempfile.TemporaryDirectory() as tmp:
            j = os.path.join(tmp, "scan.jsonl")
            a = out("scan-invertible", "--max-rank", "2", "--max-level", "3", "--journal", j)
            b = out("scan-invertible", "--max-rank", "2", "--max-level", "3", "--journal", j)
            self.assertEqual(a["resumed"], 0)
            self.assertEqual(b["resumed"], 6)
            self.assertEqual([c["invertible"] for c in a["cells"]], [c["invertible"] for c in b["cells"]])


class ExitCodes(unittest.TestCase):
    def test_usage_errors(self):
        cases = [
            (["bogus"], None),
            (["fuse", "-r", "1", "-k", "2", "--lambda", "1,2", "--mu", "0,2"], "--lambda"),
            (["fuse", "-r", "1", "-k", "2", "--lambda", "1,x", "--mu", "0,2"], "--lambda"),
            (["--no-zeroth", "fuse", "-r", "1", "-k", "2", "--lambda", "3", "--mu", "0"], "--lambda"),
            (["galois", "-r", "2", "-k", "3", "--ell", "3"], "--ell"),
            (["nz-census", "-r", "3", "-k", "4", "-d", "3"], "-d"),
            (["enumerate", "-r", "20", "-k", "20", "--capacity", "100"], "capacity"),
        ]
        for args, needle in cases:
            with self.subTest(args=args):
                p = run(*args)
                self.assertEqual(p.returncode, 2, p.stderr)
                if needle:
                    self.assertIn(needle, p.stderr)

    def test_math_failure(self):
        # the written σ-formula order fails for a = 1, b != 0
        p = run("galois", "-r", "2", "-k", "3", "--sigma")
        self.assertEqual(p.returncode, 1)
        self.assertFalse(json.loads(p.stdout)["sigma"]["ok"])


class GoldenTable(unittest.TestCase):
    def test_table_repro(self):
        p = run("table-repro", "--max-rank", "8", "--max-level", "5", "--golden", GOLDEN)
        doc = json.loads(p.stdout)
        validate("table-repro", doc)
        self.assertEqual(doc["golden"]["compared"], 40)
        # only (8,5) differs: the printed basis 2w2+w5 has ality 0 mod 9
        self.assertEqual(
            doc["golden"]["mismatches"],
            [{"r": 8, "k": 5, "rank_ok": True, "basis_ok": False, "invertible_ok": True}],
        )
        self.assertEqual(p.returncode, 1)


if __name__ == "__main__":
    if len(sys.argv) > 1 and not sys.argv[1].startswith("-"):
        BIN = sys.argv.pop(1)
    unittest.main()
