from .layers import (
    Conv1d,
    Dense,
    Dropout,
    Embedding,
    GlobalMaxPool1d,
    Lstm,
    ParameterStore,
    Relu,
    concat,
    sigmoid,
    split_grad,
)
from .network import (
    Adam,
    BranchDims,
    NetworkConfig,
    OmniRankNet,
    TrainConfig,
    TrainHistory,
    bce_from_logits,
    build_omnirank,
    bundles_to_batch,
    dims_from_bundles,
    load_checkpoint,
    predict_scores,
    save_checkpoint,
    train,
)
from .gradcheck import GradCheckResult, grad_check, grad_check_model

__all__ = [
    "Adam",
    "BranchDims",
    "Conv1d",
    "Dense",
    "Dropout",
    "Embedding",
    "GlobalMaxPool1d",
    "GradCheckResult",
    "Lstm",
    "NetworkConfig",
    "OmniRankNet",
    "ParameterStore",
    "Relu",
    "TrainConfig",
    "TrainHistory",
    "bce_from_logits",
    "build_omnirank",
    "bundles_to_batch",
    "concat",
    "dims_from_bundles",
    "grad_check",
    "grad_check_model",
    "load_checkpoint",
    "predict_scores",
    "save_checkpoint",
    "sigmoid",
    "split_grad",
    "train",
]
