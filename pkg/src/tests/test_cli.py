import io
import json
import shutil
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

from latnoether.cli import EXIT_INPUT, EXIT_NO, EXIT_YES, main
from latnoether.config import set_caps
from latnoether.paper_models import CATALOG_NAMES


class TestCli(unittest.TestCase):
    """Test cases for the command line front end."""

    def setUp(self):
        """Start every run from the environment caps."""
        set_caps(None)
        self.tmp = Path(tempfile.mkdtemp())

    def tearDown(self):
        """Drop caps set by the command line and the scratch directory."""
        set_caps(None)
        shutil.rmtree(self.tmp)

    def run_cli(self, *argv):
        out, err = io.StringIO(), io.StringIO()
        with redirect_stdout(out), redirect_stderr(err):
            code = main(list(argv))
        return code, out.getvalue(), err.getvalue()

    def test_rho_case1(self):
        """The case 1 lattice has an invertible flabby class."""
        code, out, _ = self.run_cli("rho", "--lattice", "case1_p3.json")
        self.assertEqual(code, EXIT_YES)
        self.assertIn("endo-miyata", out)
        code, out, _ = self.run_cli("rho", "--lattice", "case1_p3", "--json", "--resolution")
        doc = json.loads(out)
        self.assertEqual(doc["reason"], "endo-miyata")
        self.assertIn("resolution", doc)

    def test_classify(self):
        """Z- is not coflabby; Z[C2] is both."""
        code, out, _ = self.run_cli("classify", "--lattice", "sign.json")
        self.assertEqual(code, EXIT_NO)
        self.assertIn("coflabby", out)
        code, _, _ = self.run_cli("classify", "--lattice", "regular", "--jobs", "2")
        self.assertEqual(code, EXIT_YES)

    def test_cohomology_json(self):
        """The cohomology table is valid JSON keyed by subgroup class."""
        code, out, _ = self.run_cli("cohomology", "--lattice", "sign", "--json")
        self.assertEqual(code, EXIT_YES)
        doc = json.loads(out)
        self.assertEqual(list(doc["subgroups"]), ["1.1", "2.1"])
        self.assertEqual(doc["subgroups"]["2.1"]["H^1"]["invariant_factors"], [2])

    def test_resolve(self):
        """Resolutions report the three ranks."""
        code, out, _ = self.run_cli("resolve", "--lattice", "trivial", "--json")
        self.assertEqual(code, EXIT_YES)
        doc = json.loads(out)
        self.assertEqual(doc["P"]["rank"], 3)
        self.assertEqual(doc["E"]["rank"], 2)
        code, out, _ = self.run_cli("resolve", "--lattice", "trivial", "--compact")
        self.assertEqual(code, EXIT_YES)
        self.assertIn("rank P", out)

    def test_cert(self):
        """Z[C2] has a permutation basis and Z- has none."""
        self.assertEqual(self.run_cli("cert", "--lattice", "regular")[0], EXIT_YES)
        code, out, _ = self.run_cli("cert", "--lattice", "sign", "--json")
        self.assertEqual(code, EXIT_NO)
        self.assertEqual(json.loads(out)["verdict"], "not-permutation")

    def test_reiner(self):
        """The shipped Reiner lattice has one summand of each kind."""
        code, out, _ = self.run_cli("reiner", "--lattice", "reiner_1_1_1", "--json")
        self.assertEqual(code, EXIT_YES)
        self.assertEqual(json.loads(out)["counts"], {"a": 1, "b": 1, "c": 1})

    def test_monomial_verify(self):
        """Monomial tables verify and print their exponent lattice on request."""
        code, out, _ = self.run_cli("monomial-verify", "--action", "case1_step6_p3", "--json", "--lattice-out")
        self.assertEqual(code, EXIT_YES)
        doc = json.loads(out)
        self.assertTrue(doc["verified"])
        self.assertEqual(doc["group_order"], 6)
        self.assertEqual(doc["exponent_lattice"]["rank"], 4)

    def test_iso(self):
        """Isomorphic lattices exit 0, separated ones exit 1."""
        self.assertEqual(self.run_cli("iso", "--left", "lambda_p3", "--right", "case1_p3")[0], EXIT_YES)
        code, out, _ = self.run_cli("iso", "--left", "trivial", "--right", "sign", "--json")
        self.assertEqual(code, EXIT_NO)
        self.assertEqual(json.loads(out)["verdict"], "not-isomorphic")

    def test_catalog(self):
        """Without a name the catalog lists its entries."""
        code, out, _ = self.run_cli("catalog")
        self.assertEqual(code, EXIT_YES)
        self.assertEqual(out.split(), list(CATALOG_NAMES))
        code, out, _ = self.run_cli("catalog", "cyclic_quotient", "--param", "n=3", "--param", "d=3", "--json")
        self.assertEqual(code, EXIT_YES)
        self.assertEqual(json.loads(out)["action"]["g"], [[0, -1], [1, -1]])
        self.assertEqual(self.run_cli("catalog", "nonsense")[0], EXIT_INPUT)
        self.assertEqual(self.run_cli("catalog", "regular", "--param", "n")[0], EXIT_INPUT)

    def test_paper_case1(self):
        """The case 1 isomorphism is certified for p = 5."""
        code, out, _ = self.run_cli("paper", "case1", "--p", "5", "--verify-iso", "--json")
        self.assertEqual(code, EXIT_YES)
        doc = json.loads(out)
        self.assertEqual(doc["lattice"]["rank"], 8)
        self.assertEqual(abs(doc["det"]), 1)
        code, _, err = self.run_cli("paper", "case1", "--p", "9")
        self.assertEqual(code, EXIT_INPUT)
        self.assertIn("error", err)

    def test_paper_identities(self):
        """The cyclotomic identity and the monomial tables hold at p = 3."""
        self.assertEqual(self.run_cli("paper", "cyclotomic", "--p", "7")[0], EXIT_YES)
        self.assertEqual(self.run_cli("paper", "lambda", "--p", "3")[0], EXIT_YES)
        code, out, _ = self.run_cli("paper", "tables", "--p", "3", "--json")
        self.assertEqual(code, EXIT_YES)
        self.assertTrue(all(entry["verified"] for entry in json.loads(out).values()))

    def test_paper_fixtures(self):
        """Fixtures are written to the requested directory."""
        code, out, _ = self.run_cli("paper", "fixtures", "--p", "3", "--out", str(self.tmp))
        self.assertEqual(code, EXIT_YES)
        self.assertTrue((self.tmp / "case1_p3.json").exists())
        self.assertEqual(self.run_cli("rho", "--lattice", str(self.tmp / "case1_p3.json"))[0], EXIT_YES)

    def test_input_errors(self):
        """Missing files, malformed JSON and bad flags exit 3."""
        self.assertEqual(self.run_cli("classify", "--lattice", str(self.tmp / "missing.json"))[0], EXIT_INPUT)
        broken = self.tmp / "broken.json"
        broken.write_text("{")
        code, _, err = self.run_cli("classify", "--lattice", str(broken))
        self.assertEqual(code, EXIT_INPUT)
        self.assertIn(str(broken), err)
        self.assertEqual(self.run_cli("classify")[0], EXIT_INPUT)
        self.assertEqual(self.run_cli("unknown-verb")[0], EXIT_INPUT)
        self.assertEqual(self.run_cli("classify", "--lattice", "sign", "--log-level", "chatty")[0], EXIT_INPUT)


if __name__ == "__main__":
    unittest.main()
