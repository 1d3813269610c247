import math

import pytest

from lorenzplots import FIGURE_KINDS, FigureSpec, PlotInputError, render


def write(path, text):
    path.write_text(text)
    return str(path)


@pytest.fixture
def trajectory_csv(tmp_path):
    rows = ["t,x,y,z"]
    for k in range(200):
        t = 0.05 * k
        rows.append(f"{t},{math.sin(t)},{math.cos(t)},{20 + 5 * math.sin(3 * t)}")
    return write(tmp_path / "trajectory.csv", "\n".join(rows) + "\n")


@pytest.fixture
def return_map_csv(tmp_path):
    rows = ["zmax_i,zmax_next"]
    z = 31.0
    for _ in range(80):
        nxt = 30.0 + 16.0 * (1.0 - abs((z - 30.0) / 16.0 * 2.0 - 1.0))
        rows.append(f"{z},{nxt}")
        z = nxt if nxt > 30.5 else 31.3
    return write(tmp_path / "return_map.csv", "\n".join(rows) + "\n")


@pytest.fixture
def branch_csv(tmp_path):
    rows = ["r,period,amplitude,mu1_re,mu1_im,mu2_re,mu2_im,event"]
    for k in range(40):
        r = 350.0 - k
        mu = 0.75 + 0.008 * k
        event = "symmetry-breaking-or-fold" if k == 30 else ""
        rows.append(f"{r},{0.39 + 0.001 * k},{110 - k},{mu},0,{0.006},0,{event}")
    return write(tmp_path / "branch.csv", "\n".join(rows) + "\n")


@pytest.fixture
def sweep_maxima_csv(tmp_path):
    rows = ["r,zmax"]
    for k in range(31):
        r = 300.0 + k
        if r < 313:
            rows.append(f"{r},{330 + 0.5 * k}")
            rows.append(f"{r},{350 - 0.5 * k}")
        else:
            rows.append(f"{r},{340.0}")
    return write(tmp_path / "sweep_maxima.csv", "\n".join(rows) + "\n")


@pytest.fixture
def sweep_csv(tmp_path):
    rows = ["r,lam1,lam2,lam3,verdict,n_clusters"]
    for k in range(20):
        rows.append(f"{300 + k},{0.01 * k},-0.5,-14.0,chaotic,{40 + k}")
    return write(tmp_path / "sweep.csv", "\n".join(rows) + "\n")


@pytest.fixture
def fate_csv(tmp_path):
    rows = ["r,verdict,decision_time,min_dist_origin"]
    for k in range(10):
        r = 23.5 + 0.1 * k
        if r < 24.0:
            rows.append(f"{r},converges-to-O2,{100 + 60 * k},1.03")
        else:
            rows.append(f"{r},undecided-wandering,nan,1.01")
    return write(tmp_path / "fate.csv", "\n".join(rows) + "\n")


class TestAllKinds:
    def test_every_kind_renders(self, tmp_path, trajectory_csv, return_map_csv,
                                branch_csv, sweep_maxima_csv, sweep_csv,
                                fate_csv):
        sources = {
            "attractor-xz": trajectory_csv,
            "attractor-xy": trajectory_csv,
            "return-map": return_map_csv,
            "branch": branch_csv,
            "sweep-diagram": sweep_maxima_csv,
            "lyapunov-curve": sweep_csv,
            "fate-profile": fate_csv,
        }
        assert set(sources) == set(FIGURE_KINDS)
        for kind, src in sources.items():
            out = tmp_path / f"{kind}.png"
            render(FigureSpec(inputs=(src,), kind=kind, out=str(out)))
            assert out.exists() and out.stat().st_size > 5000

    def test_rendering_leaves_inputs_untouched(self, tmp_path, return_map_csv):
        before = open(return_map_csv, "rb").read()
        render(FigureSpec(inputs=(return_map_csv,), kind="return-map",
                          out=str(tmp_path / "m.png")))
        assert open(return_map_csv, "rb").read() == before

    def test_rerender_identical_dimensions(self, tmp_path, trajectory_csv):
        from PIL import Image

        outs = []
        for name in ("one.png", "two.png"):
            out = tmp_path / name
            render(FigureSpec(inputs=(trajectory_csv,), kind="attractor-xz",
                              out=str(out)))
            outs.append(Image.open(out).size)
        assert outs[0] == outs[1]

    def test_axis_overrides(self, tmp_path, trajectory_csv):
        out = tmp_path / "o.png"
        render(FigureSpec(inputs=(trajectory_csv,), kind="attractor-xz",
                          out=str(out), title="projection",
                          xlim=(-2.0, 2.0), ylim=(0.0, 30.0)))
        assert out.exists()


class TestErrors:
    def test_missing_column_is_named(self, tmp_path):
        src = write(tmp_path / "bad.csv", "t,x,y\n0,1,2\n")
        with pytest.raises(PlotInputError, match="z"):
            render(FigureSpec(inputs=(src,), kind="attractor-xz",
                              out=str(tmp_path / "x.png")))
        assert not (tmp_path / "x.png").exists()

    def test_empty_input_writes_nothing(self, tmp_path):
        src = write(tmp_path / "empty.csv", "zmax_i,zmax_next\n")
        out = tmp_path / "empty.png"
        with pytest.raises(PlotInputError, match="no data rows"):
            render(FigureSpec(inputs=(src,), kind="return-map", out=str(out)))
        assert not out.exists()

    def test_unknown_kind(self, tmp_path):
        with pytest.raises(PlotInputError, match="unknown figure kind"):
            render(FigureSpec(inputs=("x.csv",), kind="pie", out="y.png"))

    def test_unknown_columns_ignored(self, tmp_path):
        src = write(tmp_path / "extra.csv",
                    "zmax_i,zmax_next,bogus\n31,40,7\n40,33,8\n")
        out = tmp_path / "extra.png"
        render(FigureSpec(inputs=(src,), kind="return-map", out=str(out)))
        assert out.exists()

    def test_missing_file(self, tmp_path):
        with pytest.raises(PlotInputError, match="not found"):
            render(FigureSpec(inputs=(str(tmp_path / "nope.csv"),),
                              kind="return-map", out=str(tmp_path / "n.png")))


class TestCli:
    def test_cli_renders(self, tmp_path, trajectory_csv):
        from lorenzplots.cli import main

        out = tmp_path / "cli.png"
        assert main(["--kind", "attractor-xy", "--in", trajectory_csv,
                     "--out", str(out), "--title", "demo"]) == 0
        assert out.exists()

    def test_cli_schema_error_exit_code(self, tmp_path):
        from lorenzplots.cli import main

        src = write(tmp_path / "bad.csv", "a,b\n1,2\n")
        assert main(["--kind", "return-map", "--in", src,
                     "--out", str(tmp_path / "no.png")]) == 1
