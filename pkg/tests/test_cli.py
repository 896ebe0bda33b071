import numpy as np
import pytest

from driftreg.cli import main
from driftreg.formats import read_frame, read_manifest, read_mlrf, write_mlrf


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def parse_report(text):
    return dict(line.split(": ", 1) for line in text.strip().splitlines() if ": " in line)


@pytest.fixture
def noiseless_dir(tmp_path, capsys):
    out = tmp_path / "seq"
    code, _, _ = run(["simulate", "--scene", "synth", "--size", 64, "--k", 4, "--c", "1,2", "--snr-db", 99, "--seed", 7, "--out", out], capsys)
    assert code == 0
    return out


def test_simulate_writes_frames_and_manifest(noiseless_dir):
    m = read_manifest(noiseless_dir / "manifest.txt")
    assert m["c"] == "1,2" and m["K"] == "4" and m["seed"] == "7"
    names = m["frames"].split(",")
    assert len(names) == 4
    assert all((noiseless_dir / n).is_file() for n in names)


def test_simulate_is_byte_identical(tmp_path, capsys):
    dirs = []
    for name in ("a", "b"):
        d = tmp_path / name
        assert run(["simulate", "--size", 32, "--k", 3, "--c", "random", "--snr-db", -5, "--seed", 3, "--out", d], capsys)[0] == 0
        dirs.append(d)
    for f in sorted(p.name for p in dirs[0].iterdir()):
        assert (dirs[0] / f).read_bytes() == (dirs[1] / f).read_bytes()


def test_simulate_k1_is_usage_error(tmp_path, capsys):
    code, _, err = run(["simulate", "--k", 1, "--out", tmp_path / "x"], capsys)
    assert code == 2
    assert "--k" in err


def test_bad_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["register"])
    assert exc.value.code == 2


def test_register_noiseless(noiseless_dir, capsys, tmp_path):
    code, out, _ = run(["register", noiseless_dir, "--dump-surface", tmp_path / "s.mlrf"], capsys)
    assert code == 0
    rep = parse_report(out)
    assert rep["estimate"] == "1,2"
    assert rep["range_limited"] == "no"
    assert float(rep["wall_time_ms"]) >= 0
    surface = read_mlrf(tmp_path / "s.mlrf")
    assert surface.shape == (64, 64)
    assert float(rep["score"]) == surface[1, 2]


def test_register_via_manifest_path(noiseless_dir, capsys):
    code, out, _ = run(["register", noiseless_dir / "manifest.txt"], capsys)
    assert code == 0 and parse_report(out)["estimate"] == "1,2"


def test_register_pairwise(noiseless_dir, capsys):
    code, out, _ = run(["register", noiseless_dir, "--method", "pairwise"], capsys)
    rep = parse_report(out)
    assert code == 0 and rep["method"] == "pairwise" and rep["estimate"] == "1,2"
    assert rep["offsets"] == "1,2 1,2 1,2"


def test_register_range_limited(tmp_path, capsys):
    d = tmp_path / "far"
    run(["simulate", "--size", 64, "--k", 3, "--c", "5,0", "--seed", 1, "--out", d], capsys)
    code, out, _ = run(["register", d, "--max-drift", 3], capsys)
    rep = parse_report(out)
    r, c = (int(v) for v in rep["estimate"].split(","))
    assert code == 0 and abs(r) <= 3 and abs(c) <= 3
    assert rep["range_limited"] == "yes"


def test_register_data_errors(tmp_path, capsys):
    empty = tmp_path / "empty"
    empty.mkdir()
    assert run(["register", empty], capsys)[0] == 3
    write_mlrf(empty / "frame_1.mlrf", np.ones((4, 4)))
    assert run(["register", empty], capsys)[0] == 3
    write_mlrf(empty / "frame_2.mlrf", np.ones((4, 5)))
    assert run(["register", empty], capsys)[0] == 3
    assert run(["register", tmp_path / "missing"], capsys)[0] == 3


def test_register_pgm_directory(tmp_path, capsys):
    d = tmp_path / "pgm"
    run(["simulate", "--size", 48, "--k", 4, "--c", "-1,1", "--format", "pgm", "--seed", 2, "--out", d], capsys)
    assert (d / "frame_0001.pgm").is_file()
    code, out, _ = run(["register", d], capsys)
    assert code == 0 and parse_report(out)["estimate"] == "-1,1"


def test_coadd_noiseless_matches_scene(tmp_path, capsys):
    d = tmp_path / "clean"
    run(["simulate", "--size", 64, "--k", 5, "--c", "2,-1", "--snr-db", "inf", "--seed", 7, "--out", d], capsys)
    out = tmp_path / "recon.mlrf"
    assert run(["coadd", d, "--out", out], capsys)[0] == 0
    np.testing.assert_allclose(read_frame(out), read_mlrf(d / "scene.mlrf"), atol=1e-9)


def test_coadd_wrong_drift_smears(tmp_path, capsys):
    d = tmp_path / "n"
    run(["simulate", "--size", 64, "--k", 6, "--c", "2,1", "--snr-db", 0, "--seed", 5, "--out", d], capsys)
    scene = read_mlrf(d / "scene.mlrf")
    run(["coadd", d, "--out", tmp_path / "good.mlrf"], capsys)
    run(["coadd", d, "--c", "0,0", "--out", tmp_path / "bad.mlrf"], capsys)
    good = np.mean((read_frame(tmp_path / "good.mlrf") - scene) ** 2)
    bad = np.mean((read_frame(tmp_path / "bad.mlrf") - scene) ** 2)
    assert bad > good


def test_coadd_low_snr_residual_ratio(tmp_path, capsys):
    d = tmp_path / "low"
    run(["simulate", "--k", 30, "--c", "random", "--snr-db", -25, "--seed", 11, "--out", d], capsys)
    scene = read_mlrf(d / "scene.mlrf")
    names = read_manifest(d / "manifest.txt")["frames"].split(",")
    first = read_frame(d / names[0])
    c = [int(v) for v in read_manifest(d / "manifest.txt")["c"].split(",")]
    single = np.sum((first - np.roll(scene, c, axis=(0, 1))) ** 2)
    run(["coadd", d, "--out", tmp_path / "r.mlrf"], capsys)
    recon = np.sum((read_frame(tmp_path / "r.mlrf") - scene) ** 2)
    assert recon / single < 0.3


def test_sweep_csv(tmp_path, capsys):
    out = tmp_path / "s.csv"
    code, text, _ = run(
        ["sweep", "--size", 64, "--snr-db", "-5", "--k", "4", "--trials", 1, "--method", "ml,pairwise", "--out", out], capsys
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 3
    assert lines[1].split(",")[0] == "ml" and lines[2].split(",")[0] == "pairwise"
    assert "mean_abs_error" in text


def test_sweep_bad_grid_is_usage_error(tmp_path, capsys):
    assert run(["sweep", "--snr-db", "0", "--k", "1", "--out", tmp_path / "x.csv"], capsys)[0] == 2
    assert run(["sweep", "--snr-db", "0", "--k", "3", "--method", "foo", "--out", tmp_path / "x.csv"], capsys)[0] == 2
    assert run(["sweep", "--snr-db", "0", "--k", "3", "--jobs", 0, "--out", tmp_path / "x.csv"], capsys)[0] == 2


def test_compare_small(tmp_path, capsys):
    out = tmp_path / "c.csv"
    code, text, _ = run(["compare", "--size", 64, "--snr-db", "0,-5", "--k", 4, "--trials", 2, "--out", out], capsys)
    assert code == 0
    assert len(out.read_text().splitlines()) == 1 + 2 * 2 * 2
    assert "ml: lowest SNR" in text and "pairwise: lowest SNR" in text


def test_module_entry_point():
    import subprocess
    import sys

    res = subprocess.run([sys.executable, "-m", "driftreg", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "simulate" in res.stdout
