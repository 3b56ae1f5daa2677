from __future__ import annotations

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_algorithm, check_metric, check_mln, check_random_seed
from .composer import classify_tuples, evaluate_k_community
from .evaluation import hemln_modularity, project_tuples
from .expression import parse_expression


class KCommunityDetector(BaseEstimator):
    """k-community detection over a heterogeneous multilayer network.

    Parameters
    ----------
    expr : str
        Composition expression, e.g. ``"A *[A,D] D"``.
    metric : {"we", "wd", "wh"}, default="we"
        Meta-edge weight metric.
    algorithm : {"mwm", "mwpm", "mwrm", "mwmt"}, default="mwm"
        Pairing algorithm applied at every composition.
    seed : int, default=42
        Seed for per-layer Louvain.
    hub_threshold : float, default=1.0
        Hub cut-off as a multiple of the mean intra-community degree (``wh`` only).
    resolution : float, default=1.0
        Louvain resolution.

    Attributes
    ----------
    result_ : KCommunityResult
    tuples_ : tuple of KCommunityTuple
    total_, partial_ : list of KCommunityTuple
    assignments_ : dict of layer name -> CommunityAssignment
    """

    def __init__(self, expr="", metric="we", algorithm="mwm", seed=42, hub_threshold=1.0,
                 resolution=1.0):
        self.expr = expr
        self.metric = metric
        self.algorithm = algorithm
        self.seed = seed
        self.hub_threshold = hub_threshold
        self.resolution = resolution

    def fit(self, X, y=None, assignments=None):
        mln = check_mln(X)
        expression = parse_expression(self.expr, mln)
        self.result_ = evaluate_k_community(
            mln, expression, check_metric(self.metric), check_algorithm(self.algorithm),
            check_random_seed(self.seed), assignments=assignments,
            hub_threshold=self.hub_threshold, resolution=self.resolution)
        self.expression_ = expression
        self.tuples_ = self.result_.tuples
        self.total_, self.partial_ = classify_tuples(self.result_)
        self.assignments_ = dict(self.result_.assignments)
        return self

    def predict(self, X):
        """Block label per node of the aggregate graph (see ``project_tuples``)."""
        check_is_fitted(self, "result_")
        return project_tuples(check_mln(X), self.result_)

    def fit_predict(self, X, y=None, assignments=None):
        return self.fit(X, assignments=assignments).predict(X)

    def score(self, X, y=None):
        """Newman modularity of the projected partition on the aggregate graph."""
        check_is_fitted(self, "result_")
        return hemln_modularity(check_mln(X), self.result_)
