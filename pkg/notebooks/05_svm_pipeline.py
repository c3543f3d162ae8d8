"""
l1-regularized linear SVM as a DC program
=========================================

f(w, b) = |w|^2 + C sum hinge, g = lam |w|_1, h = |w|^2 / 2. The data
pipeline is load, optional undersampling, split, standardize (train stats).
A synthetic two-blob dataset stands in for a CSV file here.
"""

import numpy as np

from dcsplit import KappaSchedule, SolverConfig, StopRule, solve
from dcsplit.core import AlphaSchedule
from dcsplit.data import Dataset, SplitSpec, standardize, train_test_split, undersample_majority
from dcsplit.metrics import ClassificationReport
from dcsplit.problems import SvmSpec, build_svm, predict_svm
from dcsplit.solvers import Method

rng = np.random.default_rng(3)
y = np.where(rng.uniform(size=600) < 0.25, 1, -1)
X = rng.standard_normal((600, 4)) + 1.5 * y[:, None] * np.array([1.0, -0.5, 0.8, 0.0])
data = undersample_majority(Dataset(X, y), seed=0)
print("class counts after undersampling:", data.class_counts())

train, test = standardize(*train_test_split(data, SplitSpec(0.3, seed=1)))
problem = build_svm(SvmSpec(C=1.0, lam=0.001), train)
cfg = SolverConfig(beta=0.001, theta=0.01, alpha=AlphaSchedule.harmonic(0.1),
                   kappa=KappaSchedule.constant(0.3), max_iter=2000,
                   stop_rule=StopRule("absolute", 1e-4))

x0 = np.zeros(problem.dim)
for tag in ("ADMM", "DRS_THETA", "DRS_ALPHA", "DCA", "GDCP"):
    r = solve(problem, Method(tag), cfg, x0)
    pred = predict_svm(r.x[:-1], r.x[-1], test.X)
    rep = ClassificationReport.from_predictions(test.y, pred, r.trace.total_seconds, r.iterations)
    print(f"{tag:9s} acc={rep.accuracy:.4f} prec={rep.precision:.4f} mae={rep.mae:.4f} "
          f"rmse={rep.rmse:.4f} iterations={rep.iterations}")
