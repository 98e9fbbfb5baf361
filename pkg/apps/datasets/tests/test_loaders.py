import numpy as np

from apps.datasets.exceptions import CacheFormatError, CsvFormatError, DatasetError, IdxFormatError
from apps.datasets.loaders import load_csv, load_idx, read_cache, write_cache, write_csv
from apps.datasets.synthetic import two_moons

from .base_test import BaseDatasetTestCase


class IdxLoaderTests(BaseDatasetTestCase):

    def test_pixels_are_scaled_to_unit_range(self):
        pixels = np.array([[[0, 255], [51, 102]], [[255, 255], [0, 0]], [[1, 2], [3, 4]]])
        images = self.write_idx_images("images", pixels)
        labels = self.write_idx_labels("labels", [3, 0, 9])

        data, y = load_idx(images, labels)

        self.assertEqual(data.shape, (3, 4))
        np.testing.assert_array_equal(data[0], [0.0, 1.0, 0.2, 0.4])
        self.assertTrue(((data >= 0) & (data <= 1)).all())
        np.testing.assert_array_equal(y.indices, [3, 0, 9])
        self.assertEqual(y.n_classes, 10)

    def test_all_zero_images_give_zero_matrix(self):
        images = self.write_idx_images("images", np.zeros((10, 28, 28)))
        labels = self.write_idx_labels("labels", np.arange(10))
        data, _ = load_idx(images, labels)
        self.assertEqual(data.shape, (10, 784))
        self.assertFalse(data.any())

    def test_gzipped_files_are_read_transparently(self):
        pixels = np.arange(8).reshape(2, 2, 2)
        images = self.write_idx_images("images", pixels, compress=True)
        labels = self.write_idx_labels("labels", [1, 0], compress=True)
        data, y = load_idx(images, labels)
        np.testing.assert_allclose(data[1], np.arange(4, 8) / 255.0)
        self.assertEqual(y.n_classes, 2)

    def test_label_magic_in_image_file_is_rejected(self):
        images = self.write_idx_images("images", np.zeros((1, 2, 2)), magic=0x00000801)
        labels = self.write_idx_labels("labels", [0])
        with self.assertRaises(IdxFormatError) as ctx:
            load_idx(images, labels)
        self.assertIn("bad magic", str(ctx.exception))
        self.assertEqual(ctx.exception.offset, 0)
        self.assertIn("images", ctx.exception.path)

    def test_truncated_payload_is_rejected(self):
        images = self.write_idx_images("images", np.zeros((4, 2, 2)))
        images.write_bytes(images.read_bytes()[:-3])
        labels = self.write_idx_labels("labels", [0, 1, 0, 1])
        with self.assertRaises(IdxFormatError) as ctx:
            load_idx(images, labels)
        self.assertIn("truncated", str(ctx.exception))

    def test_count_mismatch_is_rejected(self):
        images = self.write_idx_images("images", np.zeros((3, 2, 2)))
        labels = self.write_idx_labels("labels", [0, 1])
        with self.assertRaises(IdxFormatError) as ctx:
            load_idx(images, labels)
        self.assertIn("count mismatch", str(ctx.exception))

    def test_missing_file_is_an_input_error(self):
        with self.assertRaises(DatasetError):
            load_idx(self.root / "nope", self.root / "nada")


class CsvLoaderTests(BaseDatasetTestCase):

    def test_classes_are_indexed_lexicographically(self):
        path = self.write_text("data.csv", "x,y,label\n0,0,a\n1,0,b\n0,1,a\n1,1,b\n")
        data, y = load_csv(path, "label")
        self.assertEqual(data.shape, (4, 2))
        np.testing.assert_array_equal(y.indices, [0, 1, 0, 1])
        self.assertEqual(y.n_classes, 2)
        self.assertEqual(y.class_names, ("a", "b"))

    def test_class_order_does_not_depend_on_row_order(self):
        path = self.write_text("data.csv", "x,label\n1,zeta\n2,alpha\n3,mid\n")
        _, y = load_csv(path, "label")
        self.assertEqual(y.class_names, ("alpha", "mid", "zeta"))
        np.testing.assert_array_equal(y.indices, [2, 0, 1])

    def test_missing_label_column(self):
        path = self.write_text("data.csv", "x,y\n0,1\n")
        with self.assertRaises(CsvFormatError):
            load_csv(path, "label")

    def test_non_numeric_feature_names_the_column(self):
        path = self.write_text("data.csv", "x,y,label\n0,1,a\n0,oops,b\n")
        with self.assertRaises(CsvFormatError) as ctx:
            load_csv(path, "label")
        self.assertIn("'y'", str(ctx.exception))
        self.assertEqual(ctx.exception.offset, 2)

    def test_nan_is_rejected(self):
        path = self.write_text("data.csv", "x,label\nnan,a\n")
        with self.assertRaises(CsvFormatError):
            load_csv(path, "label")

    def test_empty_file(self):
        path = self.write_text("data.csv", "")
        with self.assertRaises(CsvFormatError):
            load_csv(path, "label")

    def test_generated_two_moons_csv(self):
        features, labels = two_moons(200, seed=3)
        path = self.root / "moons.csv"
        write_csv(path, features, labels.indices)

        data, y = load_csv(path, "label")

        self.assertEqual(data.shape, (200, 2))
        np.testing.assert_array_equal(data, features)
        np.testing.assert_array_equal(y.indices, labels.indices)


class CacheTests(BaseDatasetTestCase):

    def test_cache_reload_is_bit_identical(self):
        values = np.random.default_rng(0).normal(size=(37, 5))
        path = self.root / "points.llbl"
        write_cache(path, values)
        reloaded = read_cache(path)
        self.assertEqual(reloaded.tobytes(), values.tobytes())

    def test_cache_with_foreign_magic_is_rejected(self):
        path = self.root / "points.llbl"
        write_cache(path, np.ones((2, 2)))
        raw = bytearray(path.read_bytes())
        raw[:4] = b"XXXX"
        path.write_bytes(bytes(raw))
        with self.assertRaises(CacheFormatError):
            read_cache(path)

    def test_cache_with_short_payload_is_rejected(self):
        path = self.root / "points.llbl"
        write_cache(path, np.ones((3, 3)))
        path.write_bytes(path.read_bytes()[:-8])
        with self.assertRaises(CacheFormatError):
            read_cache(path)
