import math

import pytest

from owpnlab.cli import (
    EXIT_IO,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VERIFY_FAIL,
    UsageError,
    main,
    parse_axis,
)

LN2 = math.log(2.0)


def read_csv(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    header = lines[0].split(",")
    return header, [dict(zip(header, line.split(","))) for line in lines[1:]]


class TestAxisParsing:
    def test_value_list(self):
        assert parse_axis("3,1,2", "P") == [1.0, 2.0, 3.0]

    def test_log_range(self):
        values = parse_axis("log:1:100:3", "P")
        assert values == pytest.approx([1.0, 10.0, 100.0], rel=1e-12)
        assert parse_axis("log:5:5:1", "P") == [5.0]

    def test_integer_axis(self):
        assert parse_axis("4,1", "L", integer=True) == [1, 4]
        with pytest.raises(UsageError):
            parse_axis("1.5", "L", integer=True)
        with pytest.raises(UsageError):
            parse_axis("0", "L", integer=True)

    def test_rejects_bad_specs(self):
        for bad in ("", "log:1:10", "log:-1:10:3", "log:1:10:0", "a,b"):
            with pytest.raises(UsageError):
                parse_axis(bad, "P")


class TestBoundsCommand:
    def test_single_point(self, tmp_path):
        out = tmp_path / "b.csv"
        assert main(["bounds", "--P", "2", "--L", "1", "--sigma2", "1",
                     "--out", str(out)]) == EXIT_OK
        header, rows = read_csv(out)
        assert header[0:3] == ["P", "L", "sigma2"]
        assert len(rows) == 1
        assert float(rows[0]["upper_total"]) == pytest.approx(0.81229199844750977, abs=1e-12)
        assert rows[0]["units"] == "nats"

    def test_zero_power_row(self, tmp_path):
        out = tmp_path / "b.csv"
        main(["bounds", "--P", "0", "--L", "2", "--sigma2", "0.5", "--out", str(out)])
        _, rows = read_csv(out)
        for col in ("upper_total", "pc_total", "cc_total"):
            assert float(rows[0][col]) == 0.0

    def test_grid_rows_and_order(self, tmp_path):
        out = tmp_path / "b.csv"
        main(["bounds", "--P", "10,1,100", "--L", "2,1", "--sigma2", "1,0.1",
              "--out", str(out)])
        _, rows = read_csv(out)
        assert len(rows) == 12
        keys = [(float(r["P"]), int(r["L"]), float(r["sigma2"])) for r in rows]
        assert keys == sorted(keys)

    def test_bits_conversion(self, tmp_path):
        nats_out, bits_out = tmp_path / "n.csv", tmp_path / "b.csv"
        point = ["--P", "5", "--L", "2", "--sigma2", "0.3"]
        main(["bounds", *point, "--out", str(nats_out)])
        main(["bounds", *point, "--units", "bits", "--out", str(bits_out)])
        _, nats_rows = read_csv(nats_out)
        _, bits_rows = read_csv(bits_out)
        for col in ("upper_total", "pc_amp", "cc_phase"):
            assert float(bits_rows[0][col]) == pytest.approx(
                float(nats_rows[0][col]) / LN2, rel=1e-14
            )
        assert bits_rows[0]["units"] == "bits"

    def test_threads_do_not_change_bytes(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        spec = ["bounds", "--P", "log:1:1e6:5", "--L", "1,4", "--sigma2", "log:0.01:10:4"]
        main([*spec, "--threads", "1", "--out", str(a)])
        main([*spec, "--threads", "3", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()


class TestGdofCommand:
    def test_anchor_rows(self, tmp_path):
        out = tmp_path / "g.csv"
        main(["gdof", "--alpha", "0.5,0.8", "--beta", "0,0.1", "--out", str(out)])
        _, rows = read_csv(out)
        anchor = next(r for r in rows if r["alpha"] == "0.5" and r["beta"] == "0")
        assert float(anchor["d_outer"]) == 0.75
        assert float(anchor["d_inner_combined"]) == 0.75
        assert float(anchor["d_exact"]) == 0.75
        assert anchor["regime_of_exactness"] == "pc"
        open_row = next(r for r in rows if r["alpha"].startswith("0.8") and r["beta"].startswith("0.1"))
        assert open_row["d_exact"] == ""
        assert open_row["regime_of_exactness"] == ""

    def test_awgn_row(self, tmp_path):
        out = tmp_path / "g.csv"
        main(["gdof", "--alpha", "0", "--beta", "-2", "--out", str(out)])
        _, rows = read_csv(out)
        for col in ("d_outer", "d_inner_pc", "d_inner_cc", "d_inner_combined", "d_exact"):
            assert float(rows[0][col]) == 1.0


class TestRegimesCommand:
    def test_classification_rows(self, tmp_path):
        out = tmp_path / "r.csv"
        main(["regimes", "--P", "2", "--L", "1", "--sigma2", "0.2,1,2", "--out", str(out)])
        _, rows = read_csv(out)
        by_sigma = {r["sigma2"]: r for r in rows}
        assert by_sigma["0.20000000000000001"]["regime"] == "near-awgn"
        assert float(by_sigma["0.20000000000000001"]["gap"]) == pytest.approx(1.4189385332046727)
        assert by_sigma["1"]["regime"] == "general"
        assert by_sigma["1"]["gap"] == ""
        assert by_sigma["2"]["regime"] == "near-onc"
        assert float(by_sigma["2"]["gap"]) == pytest.approx(0.2)


class TestRiccatiCommand:
    def test_report(self, capsys):
        assert main(["riccati", "--x", "3", "--ratio", "1"]) == EXIT_OK
        text = capsys.readouterr().out
        assert "3.7912878474779199" in text
        assert "converged" in text
        assert "posterior-CRB entropy bound" in text

    def test_zero_power(self, capsys):
        assert main(["riccati", "--x", "0", "--ratio", "2"]) == EXIT_OK
        text = capsys.readouterr().out
        assert "closed-form fixed point     : 0" in text
        assert "undefined at x = 0" in text

    def test_large_ratio(self, capsys):
        assert main(["riccati", "--x", "1", "--ratio", "1e6"]) == EXIT_OK
        text = capsys.readouterr().out
        closed = next(l for l in text.splitlines() if l.startswith("closed-form"))
        assert float(closed.split(":")[1]) == pytest.approx(1000.500125, abs=1e-6)


class TestVerifyCommand:
    def test_passes_and_reproduces(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        spec = ["verify", "--seed", "42", "--samples", "10000"]
        assert main([*spec, "--out", str(a)]) == EXIT_OK
        assert main([*spec, "--out", str(b)]) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()
        _, rows = read_csv(a)
        assert rows and all(r["status"] == "pass" for r in rows)
        notes = {r["note"] for r in rows}
        assert "analytic-limit" in notes

    def test_negative_control(self, tmp_path):
        out = tmp_path / "bad.csv"
        assert main(["verify", "--seed", "42", "--samples", "10000",
                     "--tolerance-scale", "0", "--out", str(out)]) == EXIT_VERIFY_FAIL
        _, rows = read_csv(out)
        assert any(r["status"] == "fail" for r in rows)

    def test_rejects_small_samples(self):
        assert main(["verify", "--samples", "100"]) == EXIT_USAGE


class TestConfigAndErrors:
    def test_config_file_with_flag_precedence(self, tmp_path):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text("# sweep config\nP=1,10\nL=1\nsigma2=0.5\nunits=bits\n", encoding="utf-8")
        out = tmp_path / "o.csv"
        assert main(["bounds", "--config", str(cfg), "--units", "nats",
                     "--out", str(out)]) == EXIT_OK
        _, rows = read_csv(out)
        assert len(rows) == 2
        assert rows[0]["units"] == "nats"  # flag beats config

    def test_config_unknown_key(self, tmp_path):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text("bogus=1\n", encoding="utf-8")
        assert main(["bounds", "--config", str(cfg), "--P", "1", "--L", "1",
                     "--sigma2", "1"]) == EXIT_USAGE

    def test_missing_axis_is_usage_error(self):
        assert main(["bounds", "--P", "1", "--L", "1"]) == EXIT_USAGE

    def test_bad_axis_is_usage_error(self):
        assert main(["bounds", "--P", "log:0:1:3", "--L", "1", "--sigma2", "1"]) == EXIT_USAGE

    def test_io_error_exit_code(self, tmp_path):
        missing = tmp_path / "no-such-dir" / "x.csv"
        assert main(["bounds", "--P", "1", "--L", "1", "--sigma2", "1",
                     "--out", str(missing)]) == EXIT_IO

    def test_grid_cap(self):
        assert main(["bounds", "--P", "log:1:10:500", "--L",
                     ",".join(str(i) for i in range(1, 200)),
                     "--sigma2", "log:0.1:10:200"]) == EXIT_USAGE
