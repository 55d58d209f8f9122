import json
import math
from pathlib import Path

import pytest

from channel_econ.cli import main
from channel_econ.config import ConfigError, Topology, config_sha256, load_config
from channel_econ.export import export_csv, format_cell
from channel_econ.model import Constant, PowerLaw, Uniform, World


class TestConfig:
    def test_defaults(self):
        cfg = load_config()
        assert cfg.market.tau == 288_000.0
        assert cfg.pair.ell == 10.0
        assert isinstance(cfg.dist, PowerLaw)
        assert cfg.topology is Topology.PAIRS
        assert cfg.world is None and cfg.worlds() == (
            World.NO_LIGHTNING,
            World.WITH_LIGHTNING,
        )
        assert cfg.scaled_down is True

    def test_file_roundtrip(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(
            json.dumps(
                {
                    "pair": {"lambda_a": 8.0, "lambda_b": 2.0},
                    "dist": {"type": "uniform", "z_max": 2.5},
                    "world": "no_lightning",
                    "phi_grid": [0.001, 0.01],
                    "seed": 99,
                }
            )
        )
        cfg = load_config(path)
        assert cfg.pair.delta == 6.0
        assert isinstance(cfg.dist, Uniform) and cfg.dist.z_max == 2.5
        assert cfg.world is World.NO_LIGHTNING
        assert cfg.phi_grid == (0.001, 0.01)
        assert cfg.seed == 99

    def test_partial_market_merge(self):
        cfg = load_config({"market": {"r": 0.0002}})
        assert cfg.market.r == 0.0002
        assert cfg.market.tau == 288_000.0

    def test_grid_object(self):
        cfg = load_config({"phi_grid": {"start": 1e-4, "stop": 1e-2, "num": 3, "spacing": "log"}})
        assert cfg.phi_grid == pytest.approx((1e-4, 1e-3, 1e-2))

    def test_constant_dist(self):
        cfg = load_config({"dist": {"type": "constant", "z": 0.5}})
        assert isinstance(cfg.dist, Constant)

    @pytest.mark.parametrize(
        "patch, fragment",
        [
            ({"market": {"beta": 2.0}}, "market"),
            ({"pair": {"lambda_a": -1.0}}, "pair"),
            ({"dist": {"type": "gaussian"}}, "dist"),
            ({"dist": {"type": "uniform"}}, "dist"),
            ({"topology": "mesh"}, "topology"),
            ({"world": "maybe"}, "world"),
            ({"phi_grid": []}, "phi_grid"),
            ({"phi_grid": [0.2, 0.1]}, "phi_grid"),
            ({"seed": -3}, "seed"),
            ({"replications": 0}, "replications"),
            ({"bogus_key": 1}, "bogus_key"),
        ],
    )
    def test_field_level_errors(self, patch, fragment):
        with pytest.raises(ConfigError) as err:
            load_config(patch)
        assert fragment in str(err.value)

    def test_missing_file(self):
        with pytest.raises(ConfigError):
            load_config("/nonexistent/config.json")

    def test_hash_stable_and_sensitive(self):
        a = config_sha256(load_config({"seed": 1}))
        b = config_sha256(load_config({"seed": 1}))
        c = config_sha256(load_config({"seed": 2}))
        assert a == b != c


class TestExportCsv:
    def test_roundtrip_full_precision(self, tmp_path):
        value = 1.0 / 3.0
        path = export_csv(["x"], [(value,)], tmp_path / "t.csv")
        text = path.read_text()
        cell = text.splitlines()[1]
        assert len(cell.replace("0.", "")) >= 17
        assert float(cell) == value

    def test_infinity_literal(self, tmp_path):
        path = export_csv(["v"], [(math.inf,)], tmp_path / "t.csv")
        assert path.read_text().splitlines()[1] == "inf"
        assert float("inf") == float(path.read_text().splitlines()[1])

    def test_lf_endings(self, tmp_path):
        path = export_csv(["a", "b"], [(1, 2), (3, 4)], tmp_path / "t.csv")
        raw = path.read_bytes()
        assert b"\r" not in raw
        assert raw.endswith(b"\n")

    def test_empty_table_header_only(self, tmp_path):
        path = export_csv(["a", "b"], [], tmp_path / "t.csv")
        assert path.read_text() == "a,b\n"

    def test_rejects_ragged_rows(self, tmp_path):
        with pytest.raises(ValueError):
            export_csv(["a", "b"], [(1,)], tmp_path / "t.csv")

    def test_format_cell(self):
        assert format_cell(True) == "true"
        assert format_cell(7) == "7"
        assert format_cell(-math.inf) == "-inf"
        assert format_cell("x") == "x"


class TestCli:
    def test_thresholds_example(self, tmp_path, capsys):
        code = main(["thresholds", "--phi", "0.001", "--out", str(tmp_path)])
        assert code == 0
        printed = capsys.readouterr().out
        assert "3.5669e-06" in printed and "16.7438" in printed
        assert (tmp_path / "thresholds.csv").exists()
        assert (tmp_path / "manifest_thresholds.json").exists()

    def test_missing_config_exits_2_without_output(self, tmp_path, capsys):
        code = main(
            ["demand", "--config", str(tmp_path / "absent.json"), "--out", str(tmp_path / "o")]
        )
        assert code == 2
        assert not (tmp_path / "o").exists()
        assert "config error" in capsys.readouterr().err

    def test_bad_field_exits_2(self, tmp_path, capsys):
        cfg = tmp_path / "bad.json"
        cfg.write_text(json.dumps({"market": {"beta": 5.0}}))
        code = main(["demand", "--config", str(cfg), "--out", str(tmp_path / "o")])
        assert code == 2
        assert "beta" in capsys.readouterr().err

    def test_rerun_byte_identical(self, tmp_path, capsys):
        args = ["demand", "--phi", "1e-5:1e-1:12:log", "--seed", "77"]
        a_dir, b_dir = tmp_path / "a", tmp_path / "b"
        assert main(args + ["--out", str(a_dir)]) == 0
        assert main(args + ["--out", str(b_dir)]) == 0
        for name in ("demand_no_lightning.csv", "demand_with_lightning.csv"):
            assert (a_dir / name).read_bytes() == (b_dir / name).read_bytes()

    def test_sim_rerun_byte_identical(self, tmp_path, capsys):
        args = ["sim", "reset-radius", "--seed", "5", "--replications", "4"]
        a_dir, b_dir = tmp_path / "a", tmp_path / "b"
        assert main(args + ["--out", str(a_dir)]) == 0
        assert main(args + ["--out", str(b_dir)]) == 0
        for name in (
            "sim_reset_radius_scan.csv",
            "sim_reset_radius_regression.csv",
            "manifest_sim_reset-radius.json",
        ):
            assert (a_dir / name).read_bytes() == (b_dir / name).read_bytes()

    def test_reproduce_demand_powerlaw(self, tmp_path, capsys):
        code = main(["reproduce", "demand-powerlaw", "--out", str(tmp_path)])
        assert code == 0
        lines = (tmp_path / "fig_demand_powerlaw.csv").read_text().splitlines()
        header = lines[0].split(",")
        assert "records_no_lightning_per_day" in header
        assert "records_with_lightning_per_day" in header
        # power-law blockchain volume serializes as the inf literal
        vol_idx = header.index("blockchain_volume_btc_per_day")
        assert lines[1].split(",")[vol_idx] == "inf"

    def test_reproduce_covers_every_figure_family(self):
        from channel_econ.cli import _FIGURES

        families = {"demand", "price", "txs", "reset-radius", "capacity", "network"}
        ids = set(_FIGURES)
        for family in families:
            assert any(family in fig for fig in ids), family

    def test_star_outputs(self, tmp_path, capsys):
        code = main(
            ["star", "--phi", "1e-5:1e-2:5:log", "-n", "1e7", "--out", str(tmp_path)]
        )
        assert code == 0
        manifest = json.loads((tmp_path / "manifest_star.json").read_text())
        assert manifest["extras"]["per_user_fee_multiplier"] == 2.0

    def test_manifest_echoes_config_hash(self, tmp_path, capsys):
        assert main(["lifetime", "--out", str(tmp_path), "--seed", "3"]) == 0
        manifest = json.loads((tmp_path / "manifest_lifetime.json").read_text())
        assert manifest["seed"] == 3
        assert len(manifest["config_sha256"]) == 64
        assert manifest["outputs"] == ["lifetime.csv"]
