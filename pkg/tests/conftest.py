import numpy as np
import pytest

from sepidx.core import LabeledFeatureSet


def make_fs(points, labels, name=""):
    pts = np.asarray(points, dtype=np.float32)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    return LabeledFeatureSet(points=pts,
                             labels=np.asarray(labels, dtype=np.uint32),
                             name=name)


@pytest.fixture
def fs_two_pairs():
    # two far-apart pairs; every nearest neighbor shares its label
    return make_fs([0.0, 0.1, 10.0, 10.1], [0, 0, 1, 1], name="two_pairs")


@pytest.fixture
def fs_five():
    # only the last point's neighbor (index 3, other label) mismatches
    return make_fs([0.0, 1.0, 2.5, 3.0, 10.0], [0, 0, 1, 1, 0], name="five")


# Published fixture values: (name, si, accuracy)
TABLE1_SI0 = 0.335
TABLE1 = [
    ("Xception", 0.94, 0.972),
    ("InceptionV3", 0.92, 0.969),
    ("DenseNet121", 0.87, 0.962),
    ("VGG16", 0.69, 0.853),
    ("VGG19", 0.68, 0.836),
    ("Resnet50", 0.39, 0.423),
    ("EfficientB3", 0.32, 0.186),
]

TABLE2_SI0 = 0.682
TABLE2 = [
    ("VGG16", 0.719, 0.926),
    ("VGG19", 0.700, 0.900),
    ("ResNet50", 0.631, 0.794),
]

TABLE3_SI0 = 0.826
TABLE3 = [
    ("VGG16", 0.91, 0.79),
    ("VGG19", 0.88, 0.78),
    ("DenseNet121", 0.87, 0.75),
    ("InceptionV3", 0.85, 0.71),
    ("Xception", 0.87, 0.70),
    ("Resnet50V2", 0.79, 0.66),
    ("NasnetLarge", 0.75, 0.64),
]
