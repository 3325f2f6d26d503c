"""Cross-checks against independent scientific-python implementations.

These run only where numpy/scipy/scikit-learn happen to be installed; the
smoke suite itself has no dependencies beyond pytest and the bindings.
"""

import os
import tempfile

import pytest

np = pytest.importorskip("numpy")
scipy_stats = pytest.importorskip("scipy.stats")

import statleak


def _write_arff(X, labels):
    handle = tempfile.NamedTemporaryFile("w", suffix=".arff", delete=False)
    with handle as f:
        f.write("@relation t\n")
        for j in range(X.shape[1]):
            f.write(f"@attribute a{j} numeric\n")
        f.write("@attribute class {n,p}\n@data\n")
        for row, label in zip(X, labels):
            fields = ",".join(format(float(v), ".17g") for v in row)
            f.write(fields + "," + ("p" if label else "n") + "\n")
    ds = statleak.read_arff(handle.name)
    os.unlink(handle.name)
    return ds


def test_histogram_statistics_match_numpy_and_scipy():
    rng = np.random.default_rng(42)
    data = rng.integers(0, 256, size=50000, dtype=np.uint8).tobytes()
    fp = statleak.fingerprint_bytes(data)
    arr = np.frombuffer(data, dtype=np.uint8)

    counts = np.bincount(arr, minlength=256)
    assert abs(fp.entropy - scipy_stats.entropy(counts, base=2)) < 1e-12
    assert abs(fp.arith_mean - arr.mean()) < 1e-9

    expected = len(data) / 256
    chi2_ref = ((counts - expected) ** 2 / expected).sum()
    assert abs(fp.chisq_statistic - chi2_ref) < 1e-9 * chi2_ref

    successor = np.roll(arr.astype(float), -1)
    r_ref = scipy_stats.pearsonr(arr.astype(float), successor)[0]
    assert abs(fp.serial_corr - r_ref) < 1e-10

    groups = len(data) // 6
    g = arr[: groups * 6].reshape(groups, 6).astype(np.float64)
    x = (g[:, 0] * 65536 + g[:, 1] * 256 + g[:, 2]) / (2**24 - 1)
    y = (g[:, 3] * 65536 + g[:, 4] * 256 + g[:, 5]) / (2**24 - 1)
    pi_ref = 4.0 * np.mean(x * x + y * y <= 1.0)
    assert abs(fp.monte_pi - pi_ref) < 1e-12


def test_chi_square_p_values_match_scipy():
    for df in (1, 4, 10, 100, 255):
        for stat in (0.5, 3.0, 12.0, 80.0, 300.0):
            ref = scipy_stats.chi2.sf(stat, df)
            assert statleak.chi_square_p_value(stat, df) == pytest.approx(ref, abs=1e-12, rel=1e-9)


def test_linear_svm_agrees_with_reference_solver():
    svm_mod = pytest.importorskip("sklearn.svm")
    for seed in range(3):
        rng = np.random.default_rng(seed)
        X = np.vstack([rng.normal(0, 1, (30, 3)), rng.normal(4, 1, (30, 3))])
        labels = np.array([0] * 30 + [1] * 30)
        ds = _write_arff(X, labels)
        model = statleak.train(ds, algo="svm")

        lo, hi = X.min(0), X.max(0)
        reference = svm_mod.SVC(kernel="linear", C=1.0, tol=1e-6).fit((X - lo) / (hi - lo), labels)

        probe = rng.uniform(X.min() - 1, X.max() + 1, (300, 3))
        agree = 0
        for p in probe:
            mine = model.predict([float(v) for v in p])
            theirs = int(reference.decision_function([np.clip((p - lo) / (hi - lo), 0, 1)])[0] > 0)
            agree += mine == theirs
        assert agree >= 294  # 98% decision agreement


def test_kappa_matches_reference_implementation(tmp_path):
    metrics = pytest.importorskip("sklearn.metrics")
    statleak.make_synthetic_corpus(
        tmp_path, [("a", 3.0, 40.0, 8), ("b", 30.0, 40.0, 8)],
        width=24, height=24, per_class=30, seed=3,
    )
    ds, _ = statleak.ingest_corpus(tmp_path)
    report = statleak.cross_validate(ds, algo="logitboost", folds=5, seed=1)

    actual, predicted = [], []
    for i, row in enumerate(report.confusion):
        for j, count in enumerate(row):
            actual += [i] * count
            predicted += [j] * count
    assert report.kappa == pytest.approx(metrics.cohen_kappa_score(actual, predicted), abs=1e-12)
