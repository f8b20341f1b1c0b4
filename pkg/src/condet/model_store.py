"""JSON model files. Floats go through ``repr``, so every value round-trips exactly."""

from __future__ import annotations

import json

from .features import N_FEATURES, OOV_ID, VerbPolicy, Vocabulary
from .gbdt import ClassWeights, GbdtModel, Hyperparams, TreeNode

MODEL_VERSION = "condet-model/1"


class ModelFormatError(ValueError):
    pass


class UnsupportedModelVersion(ModelFormatError):
    pass


def _node_to_dict(node: TreeNode) -> dict:
    if node.is_leaf:
        return {"leaf": node.value, "cover": node.cover}
    return {
        "feature": node.feature,
        "threshold": node.threshold,
        "gain": node.gain,
        "cover": node.cover,
        "value": node.value,
        "left": _node_to_dict(node.left),
        "right": _node_to_dict(node.right),
    }


def _node_from_dict(d: dict) -> TreeNode:
    if "leaf" in d:
        return TreeNode(value=float(d["leaf"]), cover=float(d["cover"]))
    feature = int(d["feature"])
    if not 0 <= feature < N_FEATURES:
        raise ModelFormatError(f"feature index {feature} out of range")
    return TreeNode(
        feature=feature,
        threshold=float(d["threshold"]),
        left=_node_from_dict(d["left"]),
        right=_node_from_dict(d["right"]),
        value=float(d["value"]),
        gain=float(d["gain"]),
        cover=float(d["cover"]),
    )


def model_to_dict(model: GbdtModel) -> dict:
    return {
        "version": MODEL_VERSION,
        "feature_schema_version": model.feature_schema_version,
        "hyperparams": model.hyperparams.to_dict(),
        "class_labels": list(model.class_labels),
        "class_weights": list(model.class_weights.w) if model.class_weights else None,
        "verb_policy": {
            "verb_tags": sorted(model.verb_policy.verb_tags),
            "include_aux": model.verb_policy.include_aux,
        },
        "vocabulary": {"oov_id": OOV_ID, "forms": list(model.vocab.forms)},
        "base_score": list(model.base_score),
        "trees": [[_node_to_dict(t) for t in rnd] for rnd in model.trees],
    }


def model_from_dict(d: dict) -> GbdtModel:
    if not isinstance(d, dict):
        raise ModelFormatError("model file must hold a JSON object")
    version = d.get("version")
    if version != MODEL_VERSION:
        raise UnsupportedModelVersion(f"unsupported model version {version!r}")
    try:
        vocab = d["vocabulary"]
        if vocab["oov_id"] != OOV_ID:
            raise ModelFormatError(f"unexpected OOV id {vocab['oov_id']}")
        cw = d["class_weights"]
        vp = d["verb_policy"]
        return GbdtModel(
            trees=[[_node_from_dict(t) for t in rnd] for rnd in d["trees"]],
            hyperparams=Hyperparams.from_dict(d["hyperparams"]),
            vocab=Vocabulary(vocab["forms"]),
            class_weights=ClassWeights(tuple(float(x) for x in cw)) if cw is not None else None,
            verb_policy=VerbPolicy(frozenset(vp["verb_tags"]), bool(vp["include_aux"])),
            feature_schema_version=d["feature_schema_version"],
            class_labels=tuple(d["class_labels"]),
            base_score=tuple(float(x) for x in d["base_score"]),
        )
    except ModelFormatError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise ModelFormatError(f"corrupt model file: {e}") from e


def dumps(model: GbdtModel) -> str:
    return json.dumps(model_to_dict(model), ensure_ascii=False, separators=(",", ":")) + "\n"


def save_model(model: GbdtModel, path) -> None:
    text = dumps(model)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def loads(text: str) -> GbdtModel:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelFormatError(f"model file is not valid JSON: {e}") from e
    return model_from_dict(d)


def load_model(path) -> GbdtModel:
    with open(path, encoding="utf-8") as f:
        return loads(f.read())
