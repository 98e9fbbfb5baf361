"""Dataset selection shared by the commands: IDX directory, CSV pair, or a synthetic cloud."""
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from django.conf import settings

from apps.datasets.exceptions import DatasetError
from apps.datasets.loaders import load_csv, load_idx
from apps.datasets.synthetic import gaussian_blobs, take_first, two_moons
from apps.datasets.types import LabelVector
from custom_tools.seeding import named_seed

IDX_FILES = {
    "train": ("train-images-idx3-ubyte", "train-labels-idx1-ubyte"),
    "test": ("t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte"),
}


@dataclass(frozen=True)
class LoadedDataset:
    name: str
    train_X: np.ndarray
    train_y: LabelVector
    test_X: np.ndarray
    test_y: LabelVector

    @property
    def n_classes(self) -> int:
        return max(self.train_y.n_classes, self.test_y.n_classes)


def add_dataset_arguments(parser, n_train: int = 10000, n_test: int = 2000):
    parser.add_argument('--dataset', choices=['mnist', 'csv', 'moons', 'blobs'], default='moons',
                        help='Data source (default: moons)')
    parser.add_argument('--data-dir', help='Directory holding the four MNIST IDX files (optionally .gz)')
    parser.add_argument('--train-csv', help='Training CSV for --dataset csv')
    parser.add_argument('--test-csv', help='Test CSV for --dataset csv')
    parser.add_argument('--label-column', default='label', help='Label column of the CSV files')
    parser.add_argument('--n-train', type=int, default=n_train, help='Training points to use')
    parser.add_argument('--n-test', type=int, default=n_test, help='Test points to use')
    parser.add_argument('--noise', type=float, default=0.1, help='Noise level of the synthetic moons')
    parser.add_argument('--classes', type=int, default=2, help='Class count of the synthetic blobs')


def _idx_path(directory: Path, stem: str) -> Path:
    plain = directory / stem
    if plain.exists():
        return plain
    compressed = directory / f"{stem}.gz"
    return compressed if compressed.exists() else plain


def _load_mnist(options) -> LoadedDataset:
    directory = Path(options.get('data_dir') or settings.WNLL_DATA_DIR)
    parts = {}
    for part, (images, labels) in IDX_FILES.items():
        parts[part] = load_idx(_idx_path(directory, images), _idx_path(directory, labels))
    train_X, train_y = take_first(*parts["train"], options['n_train'])
    test_X, test_y = take_first(*parts["test"], options['n_test'])
    return LoadedDataset("mnist", train_X, train_y, test_X, test_y)


def _load_csv_pair(options) -> LoadedDataset:
    if not options.get('train_csv') or not options.get('test_csv'):
        raise DatasetError("--dataset csv needs both --train-csv and --test-csv")
    train_X, train_y = load_csv(options['train_csv'], options['label_column'])
    test_X, test_y = load_csv(options['test_csv'], options['label_column'])
    if test_y.class_names != train_y.class_names:
        # Re-encode the test labels against the training classes.
        lookup = {name: index for index, name in enumerate(train_y.class_names)}
        unknown = sorted(set(test_y.class_names) - set(lookup))
        if unknown:
            raise DatasetError(f"{options['test_csv']}: labels {unknown} do not occur in the training file")
        indices = [lookup[test_y.class_names[i]] for i in test_y.indices]
        test_y = LabelVector(indices, train_y.n_classes, train_y.class_names)
    train_X, train_y = take_first(train_X, train_y, options['n_train'])
    test_X, test_y = take_first(test_X, test_y, options['n_test'])
    return LoadedDataset(Path(options['train_csv']).stem, train_X, train_y, test_X, test_y)


def _load_synthetic(options, seed: int) -> LoadedDataset:
    n_train, n_test = options['n_train'], options['n_test']
    if options['dataset'] == 'moons':
        train = two_moons(n_train, options['noise'], named_seed(seed, "data", 0))
        test = two_moons(n_test, options['noise'], named_seed(seed, "data", 1))
    else:
        train = gaussian_blobs(n_train, options['classes'], seed=named_seed(seed, "data", 0))
        test = gaussian_blobs(n_test, options['classes'], seed=named_seed(seed, "data", 1))
    return LoadedDataset(options['dataset'], *train, *test)


def load_dataset(options, seed: int = 0) -> LoadedDataset:
    if options['dataset'] == 'mnist':
        return _load_mnist(options)
    if options['dataset'] == 'csv':
        return _load_csv_pair(options)
    return _load_synthetic(options, seed)
