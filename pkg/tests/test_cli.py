import json

import pytest

from amalgams import fileio
from amalgams import fingroup as fg
from amalgams import separability as sep
from amalgams.cli import main
from amalgams.errors import ParseError
from conftest import make_amalg1, make_c2c3, make_s3_amalgam


@pytest.fixture()
def amalg1_file(tmp_path):
    path = tmp_path / "amalg1.txt"
    path.write_text(fileio.serialize_amalgam(make_amalg1()))
    return str(path)


@pytest.fixture()
def s3_file(tmp_path):
    path = tmp_path / "s3.txt"
    path.write_text(fileio.serialize_amalgam(make_s3_amalgam()))
    return str(path)


@pytest.fixture()
def c2c3_file(tmp_path):
    path = tmp_path / "c2c3.txt"
    path.write_text(fileio.serialize_amalgam(make_c2c3()))
    return str(path)


class TestFileFormats:
    def test_group_round_trip(self):
        for G in (fg.cyclic(6), fg.symmetric3(), fg.quaternion(8)):
            text = fileio.serialize_group(G)
            assert fileio.serialize_group(fileio.parse_group(text)) == text

    def test_amalgam_round_trip(self):
        for spec in (make_amalg1(), make_c2c3(), make_s3_amalgam()):
            text = fileio.serialize_amalgam(spec)
            assert fileio.serialize_amalgam(fileio.parse_amalgam(text)) == text

    def test_word_round_trip(self):
        spec = make_amalg1()
        w = fileio.parse_word(spec, "H:3 K:1")
        assert w.syllables == (("H", 3), ("K", 1))
        assert fileio.render_word(spec, w) == "H:3 K:1"
        assert fileio.parse_word(spec, "").syllables == ()

    def test_word_by_name(self):
        c2 = fg.from_table(2, [[0, 1], [1, 0]], names=["e", "s"])
        import amalgams.amalgam as am
        spec = am.make_amalgam(c2, c2, [0], [0], {0: 0})
        assert fileio.parse_word(spec, "H:s").syllables == (("H", 1),)

    def test_parse_errors(self):
        with pytest.raises(ParseError):
            fileio.parse_group("order 2\n")
        with pytest.raises(ParseError):
            fileio.parse_amalgam("[H]\norder 1\ntable\n0\n")
        with pytest.raises(ParseError):
            fileio.parse_word(make_amalg1(), "X:1")

    def test_config_env_override(self, tmp_path):
        cfg = tmp_path / "cfg"
        cfg.write_text("p 2\nmax_target_order 8\n")
        conf = fileio.load_config(cfg, env={"AMALGAMS_MAX_TARGET_ORDER": "16"})
        assert conf.max_target_order == 16 and conf.p == 2
        assert conf.budget().max_target_order == 16


class TestReduce:
    def test_text(self, amalg1_file, capsys):
        assert main(["reduce", amalg1_file, "H:1 K:2 H:1"]) == 0
        out = capsys.readouterr().out
        assert "length: 0" in out

    def test_json(self, amalg1_file, capsys):
        assert main(["--format", "json", "reduce", amalg1_file, "H:3"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["amalgam_part"] == 2
        assert payload["tail"] == "H:1"
        assert payload["length"] == 1

    def test_bad_word_is_input_error(self, amalg1_file, capsys):
        assert main(["reduce", amalg1_file, "H:9"]) == 2

    def test_missing_file_is_input_error(self, capsys):
        assert main(["reduce", "/nonexistent/x.txt", "H:1"]) == 2


class TestConjugate:
    def test_conjugate_exit_0(self, amalg1_file, capsys):
        assert main(["conjugate", amalg1_file, "H:1 K:1", "K:1 H:1"]) == 0
        assert "CONJUGATE" in capsys.readouterr().out

    def test_not_conjugate_exit_1(self, amalg1_file, capsys):
        assert main(["conjugate", amalg1_file, "H:1", "H:3"]) == 1
        assert "NOT-CONJUGATE" in capsys.readouterr().out

    def test_noncentral_requires_general(self, s3_file, capsys):
        assert main(["conjugate", s3_file, "H:1", "H:2"]) == 3
        assert "--general" in capsys.readouterr().err

    def test_noncentral_with_general(self, s3_file, capsys):
        code = main(["conjugate", "--general", s3_file, "H:1", "H:2"])
        assert code in (0, 1)

    def test_conjugator_reported(self, amalg1_file, capsys):
        assert main(["--format", "json", "conjugate", amalg1_file,
                     "H:1 K:1", "K:1 H:1"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["verdict"] == "CONJUGATE"
        assert payload["conjugator"] == "H:1"


class TestPairs:
    def test_count_and_quotients(self, amalg1_file, capsys):
        assert main(["--format", "json", "pairs", amalg1_file,
                     "-p", "2", "--max-index", "4"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["count"] == len(payload["pairs"])
        listed = {(tuple(e["R"]), tuple(e["S"])) for e in payload["pairs"]}
        assert ((0,), (0,)) in listed
        assert ((0, 2), (0, 2)) in listed
        assert ((0, 1, 2, 3), (0, 1, 2, 3)) in listed
        # each embedded quotient spec parses back
        for e in payload["pairs"]:
            fileio.parse_amalgam(e["quotient_spec"])

    def test_non_prime_p_is_input_error(self, amalg1_file, capsys):
        assert main(["pairs", amalg1_file, "-p", "4"]) == 2


class TestSeparate:
    def test_success_writes_certificate(self, amalg1_file, tmp_path, capsys):
        cert = tmp_path / "w.cert"
        assert main(["separate", amalg1_file, "H:1", "K:1",
                     "-o", str(cert)]) == 0
        parsed = fileio.parse_certificate(cert.read_text())
        assert parsed["f"] == "H:1" and parsed["g"] == "K:1"
        target = parsed["target"]
        # re-verify from the certificate alone
        spec = fileio.load_amalgam(amalg1_file)
        w = sep.Witness(target,
                        fg.GroupHom(spec.H, target, parsed["psi_H"]),
                        fg.GroupHom(spec.K, target, parsed["psi_K"]),
                        parsed["strategy"])
        f = fileio.parse_word(spec, parsed["f"])
        g = fileio.parse_word(spec, parsed["g"])
        assert sep.verify_witness(spec, w, f, g, 2)
        assert sep.word_image(w, f) == parsed["images"]["f_image"]
        assert sep.word_image(w, g) == parsed["images"]["g_image"]

    def test_conjugate_inputs_exit_4(self, amalg1_file, tmp_path, capsys):
        assert main(["separate", amalg1_file, "H:1 K:1", "K:1 H:1",
                     "-o", str(tmp_path / "w.cert")]) == 4

    def test_budget_exhausted_exit_5(self, c2c3_file, tmp_path, capsys):
        assert main(["separate", c2c3_file, "K:1", "K:2", "-p", "2",
                     "-o", str(tmp_path / "w.cert")]) == 5

    def test_config_file(self, amalg1_file, tmp_path, capsys):
        cfg = tmp_path / "cfg"
        cfg.write_text("max_target_order 8\n")
        assert main(["separate", amalg1_file, "H:1", "K:1",
                     "--config", str(cfg),
                     "-o", str(tmp_path / "w.cert")]) == 0


class TestPi1:
    def test_amalgam_graph_presentation(self, tmp_path, capsys):
        c4 = fg.cyclic(4)
        c2 = fg.cyclic(2)
        (tmp_path / "c4.grp").write_text(fileio.serialize_group(c4))
        (tmp_path / "c2.grp").write_text(fileio.serialize_group(c2))
        (tmp_path / "graph.txt").write_text(
            "[vertex u]\ngroup c4.grp\n"
            "[vertex v]\ngroup c4.grp\n"
            "[edge e0 u v]\ngroup c2.grp\nrho 0 2\ntau 0 2\n")
        assert main(["--format", "json", "pi1",
                     str(tmp_path / "graph.txt")]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert "u_g1" in payload["generators"]
        assert [["u_g2", 1], ["v_g2", -1]] in payload["relators"]

    def test_loop_graph_stable_letter(self, tmp_path, capsys):
        c2 = fg.cyclic(2)
        (tmp_path / "c2.grp").write_text(fileio.serialize_group(c2))
        (tmp_path / "loop.txt").write_text(
            "[vertex u]\ngroup c2.grp\n"
            "[edge e0 u u]\ngroup c2.grp\nrho 0 1\ntau 0 1\n")
        assert main(["--format", "json", "pi1",
                     str(tmp_path / "loop.txt")]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert "t_e0" in payload["generators"]

    def test_bad_graph_is_input_error(self, tmp_path, capsys):
        (tmp_path / "bad.txt").write_text("[vertex u]\ngroup missing.grp\n")
        assert main(["pi1", str(tmp_path / "bad.txt")]) == 2
