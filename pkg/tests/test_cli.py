import pytest

from skycell.cli import (
    CSV_COLUMNS,
    EXIT_CONFIG,
    EXIT_IO,
    EXIT_OK,
    EXIT_RUNTIME,
    CONFIG_PARSERS,
    emit_csv,
    emit_summary,
    format_config,
    load_config_file,
    main,
    parse_config,
    render_csv,
)
from skycell.engine import SimulationConfig, run_sweep
from skycell.errors import ConfigurationError


def _tiny_args(tmp_path, **extra):
    args = ["--scenario", "uma", "--isd", "500", "--alt", "25,100",
            "--positions", "cell-middle", "--trials", "2", "--seed", "5"]
    out = tmp_path / "out.csv"
    args += ["--out", str(out)]
    for key, value in extra.items():
        args += [f"--{key}", value]
    return args, out


# ------------------------------------------------------------ configuration

def test_defaults_reproduce_parameter_table():
    cfg = parse_config()
    assert cfg.scenarios == ("UMa", "RMa")
    assert cfg.fc_ghz == 3.5
    assert cfg.bandwidth_mhz == 20.0
    assert cfg.radio.scs_hz == 30e3
    assert cfg.radio.n_rb == 51
    assert cfg.ssb_rbs == 20
    assert cfg.radio.p_tx_dbm == 46.0
    assert cfg.radio.noise_figure_db == 7.0
    assert cfg.radio.l_impl_db == 8.0
    assert cfg.radio.rho == 1.0
    assert cfg.antenna.g_max_dbi == 17.0
    assert cfg.antenna.phi_3db_deg == 65.0
    assert cfg.antenna.theta_3db_deg == 65.0
    assert cfg.antenna.tilt_deg == 12.0
    assert cfg.antenna.sla_v_db == 30.0
    assert cfg.antenna.a_m_db == 30.0
    assert cfg.boresights_deg == (0.0, 120.0, 240.0)
    assert cfg.bs_height_m == 30.0
    assert cfg.isd_list == (500.0, 1000.0, 1500.0, 2000.0)
    assert cfg.altitude_list == (10.0, 25.0, 50.0, 100.0, 150.0, 300.0)
    assert cfg.position_labels == ("cell-center", "cell-middle", "cell-edge")
    assert cfg.trials == 200
    assert (cfg.sigma_los_uma_db, cfg.sigma_nlos_uma_db) == (4.0, 6.0)
    assert (cfg.sigma_los_rma_db, cfg.sigma_nlos_rma_db) == (4.0, 8.0)


def test_config_file_values_and_comments(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text(
        "# comment line\n"
        "\n"
        "scenario = rma   # trailing comment\n"
        "trials = 17\n"
        "isd_m = 500, 1500\n"
        "rho = 0.5\n"
    )
    cfg = parse_config(str(path))
    assert cfg.scenarios == ("RMa",)
    assert cfg.trials == 17
    assert cfg.isd_list == (500.0, 1500.0)
    assert cfg.radio.rho == 0.5


def test_unknown_key_names_key_and_location(tmp_path):
    path = tmp_path / "bad.conf"
    path.write_text("trials = 5\nfrequency = 3.5\n")
    with pytest.raises(ConfigurationError, match=r"frequency.*bad\.conf:2"):
        load_config_file(str(path))


def test_malformed_line_reports_location(tmp_path):
    path = tmp_path / "bad.conf"
    path.write_text("just some words\n")
    with pytest.raises(ConfigurationError, match=r"bad\.conf:1"):
        load_config_file(str(path))


def test_bad_value_reports_key(tmp_path):
    path = tmp_path / "bad.conf"
    path.write_text("trials = soon\n")
    with pytest.raises(ConfigurationError, match="trials"):
        load_config_file(str(path))


def test_missing_config_file_is_configuration_error():
    with pytest.raises(ConfigurationError):
        parse_config("/no/such/file.conf")


def test_out_of_range_rho_rejected(tmp_path):
    path = tmp_path / "bad.conf"
    path.write_text("rho = 1.5\n")
    with pytest.raises(ConfigurationError, match="rho"):
        parse_config(str(path))


def test_overrides_win_over_file(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("trials = 7\nmaster_seed = 1\n")
    cfg = parse_config(str(path), {"trials": 3})
    assert cfg.trials == 3
    assert cfg.master_seed == 1


def test_unknown_override_rejected():
    with pytest.raises(ConfigurationError):
        parse_config(None, {"frequency": 2.0})


def test_roundtrip_default_config(tmp_path):
    cfg = parse_config()
    path = tmp_path / "roundtrip.conf"
    path.write_text(format_config(cfg))
    assert parse_config(str(path)) == cfg


def test_roundtrip_modified_config(tmp_path):
    cfg = parse_config(None, {
        "scenario": ("RMa",),
        "fc_ghz": 3.14159,
        "isd_m": (432.1,),
        "altitudes_m": (11.5, 77.25),
        "trials": 9,
        "master_seed": 987654321,
        "rho": 0.125,
    })
    path = tmp_path / "roundtrip.conf"
    path.write_text(format_config(cfg))
    assert parse_config(str(path)) == cfg


def test_every_key_serialized():
    text = format_config(parse_config())
    keys = {line.split("=")[0].strip() for line in text.strip().splitlines()}
    assert keys == set(CONFIG_PARSERS)


# --------------------------------------------------------------- CSV output

@pytest.fixture(scope="module")
def tiny_result():
    cfg = SimulationConfig(
        scenarios=("UMa",), isd_list=(500.0,), altitude_list=(25.0, 100.0),
        position_labels=("cell-middle",), trials=2, master_seed=5,
    )
    return run_sweep(cfg)


def test_csv_header_and_shape(tiny_result):
    lines = render_csv(tiny_result).strip().split("\n")
    assert lines[0] == ",".join(CSV_COLUMNS)
    # 2 altitudes x (1 position + pooled) x 3 metrics
    assert len(lines) == 1 + 2 * 2 * 3


def test_csv_rows_sorted_and_formatted(tiny_result):
    lines = render_csv(tiny_result).strip().split("\n")[1:]
    keys = []
    for line in lines:
        fields = line.split(",")
        assert len(fields) == len(CSV_COLUMNS)
        scenario, isd, alt, position, metric, unit = fields[:6]
        assert scenario == "UMa"
        assert unit == ("dBm" if metric == "RSRP" else "dB")
        for value in fields[6:10]:
            assert f"{float(value):.6g}" == value  # six significant digits
        assert fields[10] == "2"  # one position pooled over two trials
        assert fields[11] == "5"
        keys.append((scenario, float(isd), float(alt), position, metric))
    assert keys == sorted(keys)


def test_csv_byte_identical_across_runs(tmp_path):
    cfg = SimulationConfig(scenarios=("RMa",), isd_list=(1000.0,), altitude_list=(50.0,),
                           position_labels=("cell-edge",), trials=3, master_seed=11)
    path_a = tmp_path / "a.csv"
    path_b = tmp_path / "b.csv"
    emit_csv(run_sweep(cfg), str(path_a))
    emit_csv(run_sweep(cfg), str(path_b))
    assert path_a.read_bytes() == path_b.read_bytes()


def test_csv_deterministic_mean_with_forced_state(tmp_path, monkeypatch):
    monkeypatch.setattr("skycell.channel.los_probability", lambda params, d2d, h: 1.0)
    cfg = SimulationConfig(
        scenarios=("UMa",), isd_list=(500.0,), altitude_list=(50.0,),
        position_labels=("cell-middle",), trials=1, master_seed=3,
        sigma_los_uma_db=0.0, sigma_nlos_uma_db=0.0,
    )
    result = run_sweep(cfg)
    stats = result.stats_at("UMa", 500.0, 50.0, "cell-middle")
    sinr_line = next(
        line for line in render_csv(result).splitlines()
        if ",cell-middle,SINR," in line
    )
    mean_field = sinr_line.split(",")[6]
    assert float(mean_field) == pytest.approx(stats["SINR"].mean, abs=5e-5)
    assert stats["SINR"].mean == stats["SINR"].p05  # single deterministic trial


def test_emit_csv_unwritable_path(tiny_result, tmp_path):
    with pytest.raises(OSError):
        emit_csv(tiny_result, str(tmp_path / "missing_dir" / "out.csv"))


# ------------------------------------------------------------------ summary

def test_summary_contains_tables_and_verdicts(tiny_result):
    text = emit_summary(tiny_result)
    assert "UMa: mean RSRP dBm / RSRQ dB / SINR dB by altitude" in text
    assert "trend checks:" in text
    for name in ("rsrp-vs-isd-nonincreasing", "sinr-rsrq-vs-isd-nondecreasing",
                 "sinr-vs-altitude-nonincreasing-isd500", "uma-median-decoupling-anchors"):
        assert name in text
    assert text.count("[SKIP]") + text.count("[PASS]") + text.count("[FAIL]") == 4


# ---------------------------------------------------------------------- CLI

def test_main_writes_csv(tmp_path):
    args, out = _tiny_args(tmp_path)
    assert main(args) == EXIT_OK
    lines = out.read_text().strip().split("\n")
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 1 + 2 * 2 * 3
    assert all(line.endswith(",5") for line in lines[1:])  # seed echo


def test_main_csv_to_stdout(capsys):
    code = main(["--scenario", "rma", "--isd", "750", "--alt", "50",
                 "--positions", "cell-center", "--trials", "1"])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith(",".join(CSV_COLUMNS))


def test_main_summary_format(capsys):
    code = main(["--scenario", "uma", "--isd", "500,1000", "--alt", "50,300",
                 "--positions", "cell-middle", "--trials", "2", "--format", "summary"])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "trend checks:" in out


def test_main_config_file_plus_overrides(tmp_path):
    conf = tmp_path / "run.conf"
    conf.write_text("scenario = uma\nisd_m = 500\naltitudes_m = 25\npositions = cell-middle\ntrials = 4\n")
    out = tmp_path / "o.csv"
    assert main(["--config", str(conf), "--trials", "2", "--out", str(out)]) == EXIT_OK
    assert all(line.split(",")[10] == "2" for line in out.read_text().strip().split("\n")[1:]
               if line.split(",")[3] != "pooled")


def test_main_missing_config_exits_2(capsys):
    assert main(["--config", "/no/such/file.conf"]) == EXIT_CONFIG
    assert "configuration error" in capsys.readouterr().err


def test_main_bad_config_value_exits_2(tmp_path, capsys):
    conf = tmp_path / "bad.conf"
    conf.write_text("rho = 2.0\n")
    assert main(["--config", str(conf)]) == EXIT_CONFIG


def test_main_degenerate_geometry_exits_3(capsys):
    # UAV exactly at the antenna: altitude equal to the BS height at cell-center
    code = main(["--scenario", "uma", "--isd", "500", "--alt", "30",
                 "--positions", "cell-center", "--trials", "1"])
    assert code == EXIT_RUNTIME
    assert "error" in capsys.readouterr().err


def test_main_unwritable_output_exits_4(tmp_path, capsys):
    args, _ = _tiny_args(tmp_path)
    args[args.index("--out") + 1] = str(tmp_path / "no_dir" / "x.csv")
    assert main(args) == EXIT_IO
    assert "i/o error" in capsys.readouterr().err
