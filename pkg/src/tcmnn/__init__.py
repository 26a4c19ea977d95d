"""Transductive confidence machine toolkit on k-nearest-neighbour
nonconformity: per-class p-values with confidence and credibility, Minkowski
and polynomial-kernel distances, evaluation harnesses with significance
filtering, nearest-neighbour and feed-forward baselines, and a grid service
backing the interactive decision-surface explorer.
"""

__version__ = "0.1.0"

from .datamodel import (DataError, DataSet, LabeledExample, SplitSpec,
                        min_max_normalize, parse_text_table, random_split,
                        read_data_file, write_data_file)
from .distance import (DistanceSpec, euclidean, eval_distance, kernel_distance,
                       minkowski, poly_feature_count, poly_kernel)
from .evaluation import (BaselineConfig, EvalRun, Statistics, TTestResult,
                         RmiResult, compute_statistics, histogram,
                         leave_one_out, mark_significance, paired_t_statistic,
                         random_split_test, rmi_index, separate_test)
from .mlp import (Mlp, MlpConfig, TrainingTrace, augment, encode_targets,
                  forward, init, predict_class, train_stochastic)
from .neighbors import NeighborList, dwknn_classify, dwknn_regress, k_nearest, knn_classify
from .tcm import (CacheMismatchError, ClassPValues, Prediction,
                  StrangenessCache, TcmConfig, TcmError, alpha_from_sums,
                  build_cache, classify, deserialize_cache, p_value,
                  prediction_from_pvalues, serialize_cache)

__all__ = [name for name in dir() if not name.startswith("_")]
