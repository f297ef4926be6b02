import json

import pytest

from nkahler import cli
from nkahler.suites import SUITES, Check, ConfigError, SuiteConfig, UnknownSuite, list_suites, run_suites


class TestConfig:
    def test_defaults(self):
        cfg = SuiteConfig()
        assert (cfg.tol_exact, cfg.tol_alg, cfg.tol_fd, cfg.fd_step) == (1e-12, 1e-10, 1e-6, 1e-5)

    def test_unknown_suite(self):
        with pytest.raises(UnknownSuite):
            SuiteConfig(suite="nope")

    @pytest.mark.parametrize("step", [1e-1, 1e-2, 1e-9, 0.0])
    def test_fd_step_range(self, step):
        with pytest.raises(ConfigError):
            SuiteConfig(suite="hypersurface", fd_step=step)

    @pytest.mark.parametrize("field", ["tol_exact", "tol_alg", "tol_fd"])
    def test_tolerances_positive(self, field):
        with pytest.raises(ConfigError):
            SuiteConfig(**{field: 0.0})


class TestChecks:
    def test_control_comparison(self):
        assert Check("x", 0.2, 0.1, op=">").passed
        assert not Check("x", 0.05, 0.1, op=">").passed
        assert not Check("x", float("nan"), 1.0).passed


class TestList:
    def test_contents(self):
        text = list_suites()
        assert "connection: Kirichenko parallel torsion" in text
        assert "spinor: Grunewald Killing-spinor correspondence" in text
        lines = text.splitlines()
        assert len(lines) == 7 and lines[-1].startswith("all")

    def test_flag(self, capsys):
        assert cli.main(["--list"]) == 0
        assert "ghclass" in capsys.readouterr().out


class TestRun:
    def test_unknown_suite_exit(self, capsys):
        assert cli.main(["--suite", "nope"]) == 2
        assert "unknown suite" in capsys.readouterr().err

    def test_bad_step_exit(self, capsys):
        assert cli.main(["--suite", "hypersurface", "--fd-step", "1e-1"]) == 2

    def test_bad_flag_exit(self, capsys):
        assert cli.main(["--frobnicate"]) == 2

    def test_environment_override(self, monkeypatch, capsys):
        monkeypatch.setenv("NKAHLER_SUITE", "octonion")
        monkeypatch.setenv("NKAHLER_SAMPLES", "300")
        assert cli.main([]) == 0
        out = capsys.readouterr().out
        assert out.startswith("suite octonion: PASS") and "samples=300" in out

    def test_flag_beats_environment(self, monkeypatch, capsys):
        monkeypatch.setenv("NKAHLER_SUITE", "nope")
        assert cli.main(["--suite", "reductive", "--samples", "50"]) == 0

    def test_failure_exit(self, capsys):
        # an absurd tolerance makes the floating-point checks fail
        assert cli.main(["--suite", "reductive", "--tol-alg", "1e-30", "--samples", "20"]) == 1
        assert "overall: FAIL" in capsys.readouterr().out

    def test_json(self, capsys):
        assert cli.main(["--suite", "octonion", "--samples", "100", "--format", "json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        (suite,) = doc["suites"]
        names = [c["name"] for c in suite["checks"]]
        assert names == sorted(names)
        assert suite["constants"]["jacobi_e1_e2_e4"] == pytest.approx(3.0)
        assert doc["pass"] is True

    def test_reproducible(self):
        cfg = SuiteConfig(suite="spinor", seed=7, n_samples=20)
        a = cli.run(cfg)[2]
        b = cli.run(cfg)[2]
        assert a == b

    def test_seed_changes_samples(self):
        a = run_suites(SuiteConfig(suite="octonion", seed=0, n_samples=50))[0]
        b = run_suites(SuiteConfig(suite="octonion", seed=1, n_samples=50))[0]
        assert [c.residual for c in a.checks] != [c.residual for c in b.checks]

    def test_timing_is_opt_in(self, capsys):
        cli.main(["--suite", "reductive", "--samples", "10"])
        assert "wall_time" not in capsys.readouterr().out
        cli.main(["--suite", "reductive", "--samples", "10", "--timing"])
        assert "wall_time" in capsys.readouterr().out

