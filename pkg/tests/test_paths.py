import os

import pytest

from lpvec.utils.paths import read_input_file, resolve_output_dir, resolve_output_path


def test_resolve_output_path_from_relative(tmp_path):
    root = str(tmp_path)

    resolved = resolve_output_path("runs/bench.csv", output_root=root)

    assert resolved == os.path.join(root, "runs", "bench.csv")
    assert os.path.isdir(os.path.join(root, "runs"))


def test_resolve_output_path_keeps_absolute_path(tmp_path):
    target = str(tmp_path / "a" / ".." / "bench.csv")

    assert resolve_output_path(target, output_root="/elsewhere") == str(
        tmp_path / "bench.csv"
    )


def test_resolve_output_path_rejects_directory(tmp_path):
    with pytest.raises(IsADirectoryError) as exc:
        resolve_output_path(str(tmp_path), kind="CSV path")

    assert "pass a file name" in str(exc.value)


def test_resolve_output_path_rejects_empty():
    with pytest.raises(ValueError, match="cannot be empty"):
        resolve_output_path("   ")


def test_resolve_output_dir_creates_directory(tmp_path):
    resolved = resolve_output_dir("plots/n50", output_root=str(tmp_path))

    assert os.path.isdir(resolved)


def test_resolve_output_dir_rejects_existing_file(tmp_path):
    existing = tmp_path / "plots"
    existing.write_text("")

    with pytest.raises(NotADirectoryError) as exc:
        resolve_output_dir(str(existing), kind="plot directory")

    assert "not a directory" in str(exc.value)


def test_read_input_file(tmp_path):
    path = tmp_path / "prog.lp"
    path.write_text("p.\n", encoding="utf-8")

    assert read_input_file(str(path)) == "p.\n"


def test_read_input_file_missing_has_cwd_hint(tmp_path):
    with pytest.raises(FileNotFoundError) as exc:
        read_input_file(str(tmp_path / "missing.lp"), kind="constraint file")

    message = str(exc.value)
    assert message.startswith("constraint file not found")
    assert "current directory" in message


def test_read_input_file_rejects_invalid_utf8(tmp_path):
    path = tmp_path / "latin1.lp"
    path.write_bytes(b"p.\nq :- \xff.\n")

    with pytest.raises(ValueError) as exc:
        read_input_file(str(path), kind="constraint file")

    message = str(exc.value)
    assert message.startswith("constraint file")
    assert str(path) in message
    assert "not valid UTF-8" in message
