"""Grayscale imaging of spectrograms, 2D-PCA features, and kNN evaluation.

Spectrograms are mapped to peak-relative dB, clipped to a fixed dynamic
range, bilinearly resized, and quantized to 8-bit images. Features are
row-space projections of each image onto the top eigenvectors of the image
covariance G = (1/n) * sum (A_i - mean)^T (A_i - mean); classification is
majority-vote kNN on feature-matrix distances. Monte-Carlo evaluation uses
stratified 80/20 splits, with every trial's RNG derived from
(seed, trial_index) so results are independent of execution schedule.
"""

from collections import Counter
from dataclasses import dataclass

import numpy as np

from twmd.tfr import Spectrogram

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class TwoDPcaModel:
    mean_image: np.ndarray
    projection: np.ndarray
    eigenvalues: np.ndarray


@dataclass(frozen=True)
class EvalReport:
    """Row-stochastic confusion matrix averaged over Monte-Carlo trials."""

    confusion: np.ndarray
    average_accuracy: float
    n_trials: int
    seed: int
    class_ids: tuple
    d: int | None

    def to_json_dict(self):
        return {
            "confusion": self.confusion.tolist(),
            "average_accuracy": self.average_accuracy,
            "n_trials": self.n_trials,
            "seed": self.seed,
            "class_ids": list(self.class_ids),
            "d": "auto" if self.d is None else self.d,
        }


def quantize_db(data: np.ndarray, dyn_range_db: float = 40.0, out_h: int = 64, out_w: int = 64) -> np.ndarray:
    """Map a nonnegative power map to a uint8 image.

    Values become dB relative to the peak, are clipped to
    [-dyn_range_db, 0], affinely scaled to [0, 1], bilinearly resized, and
    rounded (ties to even) onto [0, 255]. An all-zero map gives an all-zero
    image; positive rescaling of the input leaves the image unchanged.
    """
    data = np.asarray(data, dtype=np.float64)
    if data.size == 0:
        raise ValueError("cannot image an empty map")
    peak = data.max()
    if peak <= 0.0:
        return np.zeros((out_h, out_w), dtype=np.uint8)
    with np.errstate(divide="ignore"):
        db = 10.0 * np.log10(data / peak)
    unit = (np.clip(db, -dyn_range_db, 0.0) + dyn_range_db) / dyn_range_db
    resized = bilinear_resize(unit, out_h, out_w)
    return np.rint(255.0 * resized).astype(np.uint8)


def to_grayscale(spec: Spectrogram, dyn_range_db: float = 40.0, out_h: int = 64, out_w: int = 64) -> np.ndarray:
    """Convert a spectrogram to a uint8 grayscale image (see quantize_db)."""
    return quantize_db(spec.data, dyn_range_db=dyn_range_db, out_h=out_h, out_w=out_w)


def bilinear_resize(img: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Bilinear resampling with corner-aligned coordinates.

    When output and input sizes match this is an exact identity.
    """
    h, w = img.shape
    ys = np.arange(out_h) * ((h - 1) / (out_h - 1)) if out_h > 1 else np.zeros(1)
    xs = np.arange(out_w) * ((w - 1) / (out_w - 1)) if out_w > 1 else np.zeros(1)
    y0 = np.floor(ys).astype(int)
    x0 = np.floor(xs).astype(int)
    y1 = np.minimum(y0 + 1, h - 1)
    x1 = np.minimum(x0 + 1, w - 1)
    wy = (ys - y0)[:, None]
    wx = (xs - x0)[None, :]
    top = img[np.ix_(y0, x0)] * (1 - wx) + img[np.ix_(y0, x1)] * wx
    bot = img[np.ix_(y1, x0)] * (1 - wx) + img[np.ix_(y1, x1)] * wx
    return top * (1 - wy) + bot * wy


def image_covariance(images) -> tuple[np.ndarray, np.ndarray]:
    """Mean image and W x W image covariance of a stack of H x W images."""
    stack = np.stack([np.asarray(im, dtype=np.float64) for im in images])
    if stack.ndim != 3:
        raise ValueError("images must share a common H x W shape")
    mean = stack.mean(axis=0)
    centered = stack - mean
    flat = centered.reshape(-1, stack.shape[2])
    g = (flat.T @ flat) / stack.shape[0]
    return mean, (g + g.T) / 2.0


def fit_2dpca(images, d: int | None = None, energy: float = 0.95) -> TwoDPcaModel:
    """Fit the image-covariance eigenbasis on >= 2 images.

    d selects the top-d eigenvectors; with d=None the smallest d capturing
    `energy` of the eigenvalue sum is chosen. Eigenvalues are returned in
    descending order for all W directions.
    """
    if len(images) < 2:
        raise ValueError("2D-PCA needs at least 2 images")
    mean, g = image_covariance(images)
    w = g.shape[0]
    if d is not None and not 1 <= d <= w:
        raise ValueError(f"d must be in [1, {w}]")
    evals, evecs = np.linalg.eigh(g)
    evals = evals[::-1]
    evecs = evecs[:, ::-1]
    if d is None:
        d = choose_components(evals, energy=energy)
    return TwoDPcaModel(mean_image=mean, projection=evecs[:, :d].copy(), eigenvalues=evals.copy())


def choose_components(eigenvalues: np.ndarray, energy: float = 0.95) -> int:
    """Smallest component count whose eigenvalue mass reaches `energy`."""
    ev = np.clip(np.asarray(eigenvalues, dtype=np.float64), 0.0, None)
    total = ev.sum()
    if total <= 0.0:
        return 1
    return int(np.searchsorted(np.cumsum(ev), energy * total) + 1)


def project(model: TwoDPcaModel, image: np.ndarray) -> np.ndarray:
    """Feature matrix (A - mean) @ projection of shape H x d."""
    image = np.asarray(image, dtype=np.float64)
    if image.shape != model.mean_image.shape:
        raise ValueError(f"image shape {image.shape} != model shape {model.mean_image.shape}")
    return (image - model.mean_image) @ model.projection


def _feature_distance(a: np.ndarray, b: np.ndarray, metric: str) -> float:
    diff = a - b
    if metric == "frobenius":
        return float(np.sqrt(np.sum(diff * diff)))
    if metric == "colsum":
        return float(np.sum(np.sqrt(np.sum(diff * diff, axis=0))))
    raise ValueError(f"unknown metric {metric!r}")


def knn_classify(train, query: np.ndarray, k: int = 3, metric: str = "frobenius") -> int:
    """Majority-vote kNN over feature matrices.

    Ties are broken by the smallest summed distance among the tied labels,
    then by the lowest label id. Ranking ties at equal distance keep
    training order (stable sort).
    """
    if not train:
        raise ValueError("empty training set")
    if k > len(train):
        raise ValueError(f"k={k} exceeds training size {len(train)}")
    dists = np.array([_feature_distance(f, query, metric) for f, _ in train])
    nearest = np.argsort(dists, kind="stable")[:k]
    votes = Counter(train[i][1] for i in nearest)
    top_count = max(votes.values())
    tied = [label for label, c in votes.items() if c == top_count]
    if len(tied) == 1:
        return tied[0]
    sums = {
        label: sum(dists[i] for i in nearest if train[i][1] == label)
        for label in tied
    }
    best = min(sums.values())
    return min(label for label, s in sums.items() if s == best)


def stratified_split(labels, split: float, rng) -> tuple[list, list]:
    """Per-class random split into train/test index lists.

    Every class keeps at least one sample on each side.
    """
    labels = np.asarray(labels)
    train_idx, test_idx = [], []
    for cls in np.unique(labels):
        idx = np.flatnonzero(labels == cls)
        if idx.size < 2:
            raise ValueError(f"class {cls} has fewer than 2 samples")
        perm = rng.permutation(idx)
        n_train = int(round(split * idx.size))
        n_train = max(1, min(idx.size - 1, n_train))
        train_idx.extend(perm[:n_train].tolist())
        test_idx.extend(perm[n_train:].tolist())
    return train_idx, test_idx


def evaluate(
    dataset,
    split: float = 0.8,
    n_trials: int = 100,
    d: int | None = None,
    seed: int = 0,
    k: int = 3,
    metric: str = "frobenius",
) -> EvalReport:
    """Monte-Carlo kNN evaluation over stratified random splits.

    Per trial: split the (image, label) dataset 80/20 per class, fit the
    2D-PCA basis on the training images, project both sides, classify the
    test side, and accumulate the confusion counts. The confusion matrix is
    row-normalized at the end; average_accuracy is its diagonal mean.
    """
    if not 0.0 < split < 1.0:
        raise ValueError("split must lie in (0, 1)")
    images = [np.asarray(im, dtype=np.float64) for im, _ in dataset]
    labels = [lab for _, lab in dataset]
    class_ids = tuple(sorted(set(labels)))
    index_of = {cls: i for i, cls in enumerate(class_ids)}
    counts = np.zeros((len(class_ids), len(class_ids)))

    for trial in range(n_trials):
        rng = np.random.default_rng([int(seed) & _SEED_MASK, trial])
        train_idx, test_idx = stratified_split(labels, split, rng)
        model = fit_2dpca([images[i] for i in train_idx], d=d)
        train_feats = [(project(model, images[i]), labels[i]) for i in train_idx]
        for i in test_idx:
            pred = knn_classify(train_feats, project(model, images[i]), k=k, metric=metric)
            counts[index_of[labels[i]], index_of[pred]] += 1

    confusion = counts / counts.sum(axis=1, keepdims=True)
    return EvalReport(
        confusion=confusion,
        average_accuracy=float(np.mean(np.diag(confusion))),
        n_trials=n_trials,
        seed=seed,
        class_ids=class_ids,
        d=d,
    )


def validate_eval_report(obj) -> None:
    """Check a report dict against the published JSON layout.

    Raises ValueError on missing/unknown keys, malformed confusion rows, or
    an accuracy outside [0, 1].
    """
    expected = {"confusion", "average_accuracy", "n_trials", "seed", "class_ids", "d"}
    if set(obj) != expected:
        raise ValueError(f"report keys {sorted(obj)} != {sorted(expected)}")
    confusion = np.asarray(obj["confusion"], dtype=np.float64)
    n = len(obj["class_ids"])
    if confusion.shape != (n, n):
        raise ValueError("confusion must be C x C matching class_ids")
    if not np.allclose(confusion.sum(axis=1), 1.0, atol=1e-9):
        raise ValueError("confusion rows must each sum to 1")
    acc = obj["average_accuracy"]
    if not 0.0 <= acc <= 1.0:
        raise ValueError("average_accuracy must lie in [0, 1]")
    if not (obj["d"] == "auto" or (isinstance(obj["d"], int) and obj["d"] >= 1)):
        raise ValueError("d must be 'auto' or a positive integer")
    if not (isinstance(obj["n_trials"], int) and obj["n_trials"] >= 1):
        raise ValueError("n_trials must be a positive integer")
