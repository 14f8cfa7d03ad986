"""DRM round-trips, block registration, composition and standardization."""

import struct

import numpy as np
import pytest

from heterorep.errors import (
    AlignmentError,
    CompositionError,
    FormatError,
    IntegrityError,
    ParameterError,
)
from heterorep.stacking import (
    BlockRegistry,
    Scenario,
    apply_standardizer,
    compose,
    fit_standardizer,
    read_drm,
    read_drm_header,
    write_drm,
)


def random_block(rng, rows, cols):
    return rng.standard_normal((rows, cols)).astype(np.float32)


class TestDrmFormat:
    def test_roundtrip_bitwise(self, tmp_path):
        rng = np.random.Generator(np.random.PCG64(1))
        matrix = random_block(rng, 7, 5)
        ids = [f"doc{i}" for i in range(7)]
        path = tmp_path / "block.drm"
        write_drm(path, matrix, ids)
        loaded, loaded_ids = read_drm(path)
        assert np.array_equal(loaded, matrix)
        assert loaded_ids == ids
        assert read_drm_header(path) == (7, 5)

    def test_zero_column_write_refused(self, tmp_path):
        with pytest.raises(FormatError):
            write_drm(tmp_path / "bad.drm", np.zeros((3, 0), dtype=np.float32), ["a", "b", "c"])

    def test_zero_column_read_refused(self, tmp_path):
        path = tmp_path / "bad.drm"
        path.write_bytes(b"DRM1" + struct.pack("<QQ", 3, 0))
        with pytest.raises(FormatError, match="0 columns"):
            read_drm(path)

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "bad.drm"
        path.write_bytes(b"XXXX" + struct.pack("<QQ", 1, 1) + b"\x00" * 4)
        with pytest.raises(FormatError, match="magic"):
            read_drm(path)

    def test_truncated_payload(self, tmp_path):
        path = tmp_path / "trunc.drm"
        path.write_bytes(b"DRM1" + struct.pack("<QQ", 2, 2) + b"\x00" * 7)
        with pytest.raises(FormatError, match="truncated"):
            read_drm(path)

    def test_row_id_count_mismatch_on_write(self, tmp_path):
        with pytest.raises(AlignmentError):
            write_drm(tmp_path / "x.drm", np.zeros((2, 2), dtype=np.float32), ["only-one"])


class TestRegistry:
    def ids(self, n):
        return [f"d{i}" for i in range(n)]

    def test_register_and_file_roundtrip(self, tmp_path):
        rng = np.random.Generator(np.random.PCG64(2))
        reg = BlockRegistry(self.ids(4))
        m = random_block(rng, 4, 3)
        path = tmp_path / "b.drm"
        write_drm(path, m, self.ids(4))
        block = reg.register_file("ext", "text", path)
        assert np.array_equal(block.matrix, m)

    def test_row_mismatch(self):
        reg = BlockRegistry(self.ids(3))
        with pytest.raises(AlignmentError, match="2 rows"):
            reg.register("b", "kg", np.zeros((2, 2), dtype=np.float32))

    def test_sidecar_divergence_names_first_id(self, tmp_path):
        rng = np.random.Generator(np.random.PCG64(3))
        path = tmp_path / "b.drm"
        write_drm(path, random_block(rng, 3, 2), ["d0", "WRONG", "d2"])
        reg = BlockRegistry(self.ids(3))
        with pytest.raises(AlignmentError, match="WRONG"):
            reg.register_file("b", "text", path)

    def test_nan_rejected(self):
        reg = BlockRegistry(self.ids(1))
        with pytest.raises(IntegrityError):
            reg.register("b", "text", np.array([[np.nan]], dtype=np.float32))

    def test_duplicate_name_and_frozen(self):
        reg = BlockRegistry(self.ids(1))
        reg.register("b", "text", np.ones((1, 1), dtype=np.float32))
        with pytest.raises(CompositionError):
            reg.register("b", "text", np.ones((1, 1), dtype=np.float32))
        reg.freeze()
        with pytest.raises(CompositionError):
            reg.register("c", "text", np.ones((1, 1), dtype=np.float32))

    def test_unknown_kind(self):
        reg = BlockRegistry(self.ids(1))
        with pytest.raises(ParameterError):
            reg.register("b", "graph", np.ones((1, 1), dtype=np.float32))


class TestScenariosAndCompose:
    def build(self, dims, kinds=None, rows=6, seed=4):
        rng = np.random.Generator(np.random.PCG64(seed))
        reg = BlockRegistry([f"d{i}" for i in range(rows)])
        for i, d in enumerate(dims):
            kind = kinds[i] if kinds else "text"
            reg.register(f"b{i}", kind, random_block(rng, rows, d))
        return reg

    def test_table_dimensions_lm_scenario(self):
        reg = self.build([16, 512, 768, 768, 768])
        matrix, attribution = compose(reg.scenario("LM"), reg)
        assert matrix.shape[1] == 2832

    def test_six_kg_blocks(self):
        reg = self.build([512] * 6, kinds=["kg"] * 6)
        matrix, _ = compose(reg.scenario("KG"), reg)
        assert matrix.shape[1] == 3072

    def test_slices_bitwise_and_partition(self):
        reg = self.build([3, 5, 2])
        matrix, attribution = compose(reg.scenario("LM"), reg)
        pos = 0
        for name, start, stop in attribution:
            assert start == pos
            assert np.array_equal(matrix[:, start:stop], reg[name].matrix)
            pos = stop
        assert pos == matrix.shape[1]

    def test_single_block_identity(self):
        reg = self.build([4])
        matrix, attribution = compose(Scenario("one", ("b0",)), reg)
        assert np.array_equal(matrix, reg["b0"].matrix)
        assert attribution == [("b0", 0, 4)]

    def test_builtin_kind_filters(self):
        reg = self.build([2, 3, 4], kinds=["text", "kg", "kg-entity"])
        assert reg.scenario("LM").blocks == ("b0",)
        assert reg.scenario("KG").blocks == ("b1",)
        assert reg.scenario("LM+KG").blocks == ("b0", "b1")
        assert reg.scenario("LM+KG+KG-ENTITY").blocks == ("b0", "b1", "b2")

    def test_custom_subset_keeps_registration_order(self):
        reg = self.build([2, 2, 2])
        assert reg.scenario("mine", ["b2", "b0"]).blocks == ("b0", "b2")

    def test_unknown_blocks_and_builtins(self):
        reg = self.build([2])
        with pytest.raises(CompositionError, match="b9"):
            reg.scenario("mine", ["b9"])
        with pytest.raises(ParameterError):
            reg.scenario("WEIRD")
        with pytest.raises(CompositionError):
            compose(Scenario("ghost", ("nope",)), reg)


class TestStandardizer:
    def test_two_point_column(self):
        s = fit_standardizer(np.array([[0.0], [2.0]], dtype=np.float32))
        out = apply_standardizer(s, np.array([[0.0], [2.0]], dtype=np.float32))
        np.testing.assert_allclose(out[:, 0], [-1.0, 1.0])

    def test_constant_column_passes_through(self):
        m = np.full((4, 1), 5.0, dtype=np.float32)
        s = fit_standardizer(m)
        assert s.std[0] == 1.0 and s.mean[0] == 0.0
        np.testing.assert_array_equal(apply_standardizer(s, m)[:, 0], m[:, 0])

    def test_train_matrix_becomes_zero_mean_unit_std(self):
        rng = np.random.Generator(np.random.PCG64(5))
        m = (rng.standard_normal((40, 6)) * 3 + 1).astype(np.float32)
        s = fit_standardizer(m)
        z = apply_standardizer(s, m)
        np.testing.assert_allclose(z.mean(axis=0), 0.0, atol=1e-6)
        np.testing.assert_allclose(z.std(axis=0), 1.0, atol=1e-6)

    def test_invertible_on_non_constant_columns(self):
        rng = np.random.Generator(np.random.PCG64(6))
        m = rng.standard_normal((15, 3)).astype(np.float32)
        s = fit_standardizer(m)
        z = apply_standardizer(s, m)
        back = z * s.std + s.mean
        np.testing.assert_allclose(back, m, atol=1e-6)

    def test_empty_train_rejected(self):
        with pytest.raises(ParameterError):
            fit_standardizer(np.zeros((0, 3), dtype=np.float32))

    def test_column_count_mismatch(self):
        s = fit_standardizer(np.ones((2, 2), dtype=np.float32))
        with pytest.raises(CompositionError):
            apply_standardizer(s, np.ones((2, 3), dtype=np.float32))
