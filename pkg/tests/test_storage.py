import json

from app.commands.common import RunContext
from app.repositories import ReportRepository
from app.utils.fingerprint import fingerprint_directory
from app.utils.storage import ArtifactStore, FileValidator


class TestArtifactStore:

    def test_records_relative_names_in_order(self, tmp_path):
        store = ArtifactStore(tmp_path / "out")
        store.write_text("b.json", "{}\n")
        store.write_bytes("nested/a.bin", b"\x00\x01")
        store.write_text("b.json", "[]\n")
        assert store.artifacts() == ["b.json", "nested/a.bin"]
        assert (tmp_path / "out" / "nested" / "a.bin").read_bytes() == b"\x00\x01"

    def test_text_uses_unix_newlines(self, tmp_path):
        path = ArtifactStore(tmp_path).write_text("x.csv", "a\nb\n")
        assert path.read_bytes() == b"a\nb\n"


class TestFileValidator:

    def test_input_messages_name_flag(self, tmp_path):
        ok, message = FileValidator.validate_input(tmp_path / "absent", "--input")
        assert not ok and message.startswith("--input")
        empty = tmp_path / "empty.csv"
        empty.write_text("")
        ok, message = FileValidator.validate_input(empty, "--input")
        assert not ok and "vacío" in message

    def test_directory_lists_missing_files(self, tmp_path):
        (tmp_path / "dataset.json").write_text("{}")
        ok, message = FileValidator.validate_directory(tmp_path, "--data", ("dataset.json", "train.bin"))
        assert not ok
        assert "train.bin" in message and "dataset.json" not in message


class TestReports:

    def test_json_is_sorted_and_stable(self, tmp_path):
        repo = ReportRepository(ArtifactStore(tmp_path))
        repo.write_json("r.json", {"b": 1, "a": [1, 2]})
        assert (tmp_path / "r.json").read_text().splitlines()[1].strip().startswith('"a"')

    def test_csv_header(self, tmp_path):
        repo = ReportRepository(ArtifactStore(tmp_path))
        repo.write_csv("t.csv", ("group", "users"), [(1, 10), (2, 11)])
        assert (tmp_path / "t.csv").read_text() == "group,users\n1,10\n2,11\n"


class TestFingerprint:

    def test_depends_on_content_only(self, tmp_path):
        for root in ("a", "b"):
            (tmp_path / root).mkdir()
            (tmp_path / root / "x.bin").write_bytes(b"123")
            (tmp_path / root / "y.bin").write_bytes(b"456")
        names = ["y.bin", "x.bin"]
        assert fingerprint_directory(tmp_path / "a", names) == fingerprint_directory(tmp_path / "b", names[::-1])
        (tmp_path / "b" / "x.bin").write_bytes(b"124")
        assert fingerprint_directory(tmp_path / "a", names) != fingerprint_directory(tmp_path / "b", names)


class TestRunManifest:

    def test_manifest_lists_itself(self, tmp_path):
        run = RunContext("evaluate", tmp_path)
        run.store.write_text("metrics.json", "{}\n")
        manifest = run.finish(config={"k": 20}, seed=0, epoch_wall_times=[0.5])
        on_disk = json.loads((tmp_path / "run_manifest.json").read_text())
        assert on_disk["artifacts"] == ["metrics.json", "run_manifest.json"]
        assert on_disk["command"] == "evaluate"
        assert manifest.epoch_wall_times == [0.5]
