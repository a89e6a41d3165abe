import csv
import io
import os

import pytest

from dnastash.cli import main
from dnastash.encoder import encode_to_oligos
from dnastash.formats import read_dnac, read_fasta, write_dnac


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_encode_default_name_and_report(tmp_path, data_dir, capsys):
    photo = tmp_path / "photo.png"
    photo.write_bytes((data_dir / "gradient.png").read_bytes())
    code, out, _ = run(capsys, "encode", photo)
    assert code == 0
    target = tmp_path / "photo.png.dnac"
    assert target.exists()
    assert "117" in out
    code, out, _ = run(capsys, "encode", photo, "--machine-readable")
    fields = dict(line.split("=", 1) for line in out.splitlines())
    assert fields["oligo_length"] == "117"
    assert int(fields["oligo_count"]) == len(read_dnac(open(target, "rb")))
    assert int(fields["dnac_size"]) == target.stat().st_size


def test_missing_input(tmp_path, capsys):
    code, _, err = run(capsys, "encode", tmp_path / "nope.bin")
    assert code == 2
    assert "not found" in err
    assert not (tmp_path / "nope.bin.dnac").exists()
    assert os.listdir(tmp_path) == []


def test_bad_flag_is_usage(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "x", "--drop-rate", "2"])
    assert exc.value.code == 2


def test_round_trip_megabyte(tmp_path, capsys):
    src = tmp_path / "blob.bin"
    src.write_bytes(os.urandom(1 << 20))
    assert run(capsys, "encode", src)[0] == 0
    out = tmp_path / "back.bin"
    code, stdout, _ = run(capsys, "decode", f"{src}.dnac", "-o", out)
    assert code == 0
    assert out.read_bytes() == src.read_bytes()
    assert "Bytes written" in stdout


def test_decode_to_stdout(tmp_path, capfdbinary):
    src = tmp_path / "t.txt"
    src.write_bytes(b"to stdout")
    main(["encode", str(src)])
    capfdbinary.readouterr()
    assert main(["decode", f"{src}.dnac"]) == 0
    out, err = capfdbinary.readouterr()
    assert out == b"to stdout"
    assert b"Bytes written" in err


def test_corrupted_container(tmp_path, capsys):
    src = tmp_path / "a.txt"
    src.write_bytes(b"corrupt me" * 20)
    main(["encode", str(src)])
    dnac = tmp_path / "a.txt.dnac"
    dnac.write_bytes(dnac.read_bytes()[:-5])
    out = tmp_path / "out"
    code, _, err = run(capsys, "decode", dnac, "-o", out)
    assert code == 3
    assert "MalformedContainer" in err
    assert not out.exists()


def _write(path, oligos):
    with open(path, "wb") as fh:
        write_dnac(oligos, fh)


def test_tie_exit_code(tmp_path, capsys):
    (oligo,) = encode_to_oligos(b"x")
    i = 10
    new = next(b for b in "ACGT" if b not in oligo[i - 1 : i + 2])
    _write(tmp_path / "tie.dnac", [oligo, oligo[:i] + new + oligo[i + 1 :]])
    code, _, err = run(capsys, "decode", tmp_path / "tie.dnac", "-o", tmp_path / "o")
    assert code == 4
    assert "VoteTie" in err


def test_gap_exit_code(tmp_path, capsys):
    oligos = encode_to_oligos(os.urandom(500))
    _write(tmp_path / "gap.dnac", oligos[:5] + oligos[9:])
    code, _, err = run(capsys, "decode", tmp_path / "gap.dnac", "-o", tmp_path / "o")
    assert code == 5
    assert "CoverageGap" in err


def test_wrong_file_id_exit_code(tmp_path, capsys):
    src = tmp_path / "a"
    src.write_bytes(b"abc")
    main(["encode", str(src), "--file-id", "4"])
    capsys.readouterr()
    code, _, _ = run(capsys, "decode", f"{src}.dnac", "--file-id", "2", "-o", tmp_path / "o")
    assert code == 6
    assert run(capsys, "decode", f"{src}.dnac", "--file-id", "4", "-o", tmp_path / "o")[0] == 0
    assert (tmp_path / "o").read_bytes() == b"abc"


def test_shuffled_container_decodes(tmp_path, capsys):
    import random
    data = os.urandom(30000)
    oligos = encode_to_oligos(data)
    random.Random(1).shuffle(oligos)
    _write(tmp_path / "s.dnac", oligos)
    assert run(capsys, "decode", tmp_path / "s.dnac", "-o", tmp_path / "o")[0] == 0
    assert (tmp_path / "o").read_bytes() == data


def test_estimate_memory(tmp_path, capsys):
    src = tmp_path / "f"
    src.write_bytes(os.urandom(1000))
    code, out, _ = run(capsys, "estimate-memory", src, "--exact", "--machine-readable",
                       "--save", tmp_path / "rep.txt")
    assert code == 0
    fields = dict(line.split("=", 1) for line in out.splitlines())
    main(["encode", str(src), "-o", str(tmp_path / "f.dnac")])
    oligos = read_dnac(open(tmp_path / "f.dnac", "rb"))
    assert int(fields["oligo_count"]) == len(oligos)
    assert int(fields["dna_string_length"]) == 25 * (len(oligos) + 3)
    assert (tmp_path / "rep.txt").read_text() == out
    code, out, _ = run(capsys, "estimate-memory", src)
    assert "Amount of DNA required" in out


def test_estimate_biochem(tmp_path, capsys):
    src = tmp_path / "f"
    src.write_bytes(os.urandom(200))
    main(["encode", str(src)])
    capsys.readouterr()
    n = len(read_dnac(open(f"{src}.dnac", "rb")))
    code, out, _ = run(capsys, "estimate-biochem", f"{src}.dnac", "--salt-mm", "50",
                       "--cost-per-base", "0.1", "--machine-readable")
    assert code == 0
    fields = dict(line.split("=", 1) for line in out.splitlines())
    assert int(fields["total_bases"]) == 117 * n
    assert float(fields["total_cost"]) == pytest.approx(0.1 * 117 * n)
    with pytest.raises(SystemExit):
        main(["estimate-biochem", f"{src}.dnac", "--salt-mm", "50"])
    assert run(capsys, "estimate-biochem", f"{src}.dnac", "--salt-mm", "0",
               "--cost-per-base", "1")[0] == 2


def test_export_fasta(tmp_path, capsys):
    src = tmp_path / "f"
    src.write_bytes(os.urandom(700))
    main(["encode", str(src), "--file-id", "3", "-o", str(tmp_path / "f.dnac")])
    assert run(capsys, "export-fasta", tmp_path / "f.dnac")[0] == 0
    oligos = [o.bases for o in read_dnac(open(tmp_path / "f.dnac", "rb"))]
    records = read_fasta(open(tmp_path / "f.fasta", "rb"))
    assert [r[2] for r in records] == oligos
    assert [r[1] for r in records] == list(range(len(oligos)))
    assert {r[0] for r in records} == {3}
    assert (tmp_path / "f.fasta").read_text().count(">") == len(oligos)


def test_simulate_csv(tmp_path, capsys):
    src = tmp_path / "f"
    src.write_bytes(os.urandom(500))
    code, out, _ = run(capsys, "simulate", src, "--trials", "3", "--seed", "5")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert out.splitlines()[0] == "seed,trial,drop_rate,sub_rate,dup_factor,recovered,discarded,conflicts"
    assert [r["recovered"] for r in rows] == ["true"] * 3
    assert [r["trial"] for r in rows] == ["0", "1", "2"]
    code, _, _ = run(capsys, "simulate", src, "--drop-rate", "0.5", "--trials", "2",
                     "-o", tmp_path / "sim.csv")
    rows = list(csv.DictReader(open(tmp_path / "sim.csv")))
    assert len(rows) == 2 and all(r["recovered"] == "false" for r in rows)
