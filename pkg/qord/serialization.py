"""
JSON/YAML documents for parameterizations, forms, changes and results.

Terms are written in graded-lex ascending order with coefficients as
lowest-terms strings ("p/q" or "p").
"""

import json
import logging
import os
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from .branch import Parameterization, RForm, validate
from .errors import InputError
from .reduce import CoordinateChange, ceiling_vector
from .series import FracSeries

logger = logging.getLogger(__name__)


def parse_fraction(value: Any) -> Fraction:
    """Parse "p/q", "p" or an integer into a Fraction."""
    if isinstance(value, bool):
        raise InputError(f"invalid coefficient {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"invalid coefficient {value!r}")
    raise InputError(f"coefficients must be strings or integers, got {value!r}")


class TermModel(BaseModel):
    """One monomial of a series or polynomial."""
    exp: List[int] = Field(description="Exponent vector")
    coef: str = Field(description="Rational coefficient in lowest terms")

    @field_validator("coef", mode="before")
    @classmethod
    def _coef(cls, value):
        return str(parse_fraction(value))

    @field_validator("exp")
    @classmethod
    def _exp(cls, value):
        if any(x < 0 for x in value):
            raise ValueError(f"negative exponent {value}")
        return value


class PolynomialModel(BaseModel):
    terms: List[TermModel] = Field(default_factory=list, description="Polynomial terms")

    @model_validator(mode="before")
    @classmethod
    def _accept_list(cls, value):
        if isinstance(value, list):
            return {"terms": value}
        return value


class ParameterizationModel(BaseModel):
    """Document for H = (t_1^n, ..., t_r^n, S(t))."""
    r: int = Field(ge=1, description="Number of t-variables")
    n: int = Field(description="Multiplicity")
    trunc: Optional[int] = Field(default=None, ge=1, description="Truncation order of S")
    terms: List[TermModel] = Field(description="Terms of S")


class RFormModel(BaseModel):
    components: List[PolynomialModel] = Field(description="Coefficients h_1..h_{r+1}")


class ChangeModel(BaseModel):
    """Document for a coordinate change."""
    a: List[str] = Field(description="Linear coefficients a_1..a_{r+1}")
    P: List[PolynomialModel] = Field(description="Polynomials P_1..P_{r+1}")
    roots: Optional[List[str]] = Field(default=None, description="n-th roots c_i of a_i")
    kind: str = "general"
    target: Optional[List[int]] = None

    @field_validator("a", "roots", mode="before")
    @classmethod
    def _fractions(cls, value):
        if value is None:
            return value
        return [str(parse_fraction(x)) for x in value]


class ClassQueryModel(BaseModel):
    n: int = Field(ge=2)
    lambda1: List[int] = Field(min_length=2, max_length=2)


def parse_model(model_type, data: Dict[str, Any]):
    try:
        return model_type.model_validate(data)
    except ValidationError as e:
        raise InputError(f"malformed {model_type.__name__}: {e.errors()[0]['msg']}",
                         details={"errors": [str(err["loc"]) + ": " + err["msg"] for err in e.errors()]})


def series_from_terms(terms: Sequence[TermModel], r: int, trunc: Optional[int] = None) -> FracSeries:
    result: Dict[tuple, Fraction] = {}
    for term in terms:
        if len(term.exp) != r:
            raise InputError(f"exponent {term.exp} does not have {r} coordinates")
        exp = tuple(term.exp)
        result[exp] = result.get(exp, Fraction(0)) + Fraction(term.coef)
    return FracSeries(result, r, trunc)


def terms_to_list(s: FracSeries) -> List[Dict[str, Any]]:
    return [{"exp": list(e), "coef": str(c)} for e, c in s.items()]


def parameterization_to_dict(P: Parameterization) -> Dict[str, Any]:
    return {"r": P.r, "n": P.n, "trunc": P.trunc, "terms": terms_to_list(P.series)}


def parameterization_from_dict(data: Dict[str, Any], trunc: Optional[int] = None) -> Parameterization:
    """
    Build and validate a parameterization from a document.

    Args:
        data: Parsed document
        trunc: Truncation order overriding the document's

    Returns:
        The validated Parameterization
    """
    model = parse_model(ParameterizationModel, data)
    S = series_from_terms(model.terms, model.r)
    return validate(model.r, model.n, S, trunc if trunc is not None else model.trunc)


def rform_from_dict(data: Dict[str, Any], r: int) -> RForm:
    model = parse_model(RFormModel, data)
    if len(model.components) != r + 1:
        raise InputError(f"a form needs {r + 1} components, got {len(model.components)}")
    return RForm([series_from_terms(c.terms, r + 1) for c in model.components])


def rform_to_dict(omega: RForm) -> Dict[str, Any]:
    return {"components": [terms_to_list(c) for c in omega.components]}


def change_to_dict(C: CoordinateChange) -> Dict[str, Any]:
    result = {
        "a": [str(x) for x in C.a],
        "P": [terms_to_list(p) for p in C.P],
        "kind": C.kind,
    }
    if C.roots is not None:
        result["roots"] = [str(c) for c in C.roots]
    if C.target is not None:
        result["target"] = list(C.target)
    return result


def change_from_dict(data: Dict[str, Any], P: Parameterization) -> CoordinateChange:
    model = parse_model(ChangeModel, data)
    if len(model.a) != P.r + 1 or len(model.P) != P.r + 1:
        raise InputError(f"a change for r = {P.r} needs {P.r + 1} coefficients and polynomials")
    return CoordinateChange(
        a=[Fraction(x) for x in model.a],
        P=[series_from_terms(p.terms, P.r + 1) for p in model.P],
        alpha=ceiling_vector(P.n, P.lambda1),
        roots=[Fraction(x) for x in model.roots] if model.roots is not None else None,
        kind=model.kind,
        target=tuple(model.target) if model.target is not None else None,
    )


def class_query_from_dict(data: Dict[str, Any]) -> ClassQueryModel:
    return parse_model(ClassQueryModel, data)


def load_document(source: str) -> Dict[str, Any]:
    """
    Read a JSON or YAML document from a path, or parse inline JSON.

    Raises:
        InputError: if the file is unreadable or the content malformed
    """
    text = source.strip()
    try:
        if text.startswith("{"):
            data = json.loads(text)
        else:
            with open(source, "r") as f:
                if source.endswith((".yaml", ".yml")):
                    data = yaml.safe_load(f)
                else:
                    data = json.load(f)
    except OSError as e:
        raise InputError(f"cannot read {source}: {e.strerror}")
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise InputError(f"malformed document {source[:60]}: {e}")
    if not isinstance(data, dict):
        raise InputError("the document must be a mapping")
    return data


def dumps(data: Any) -> str:
    """Canonical JSON text."""
    return json.dumps(data, sort_keys=False, separators=(",", ":"), ensure_ascii=False)


class ResultStore:
    """
    Manages storage and retrieval of computed results as YAML files.
    """

    def __init__(self, storage_dir: str = "data/results"):
        """
        Initialize the result store.

        Args:
            storage_dir: Directory to store result files
        """
        self.storage_dir = storage_dir
        os.makedirs(storage_dir, exist_ok=True)

    def _path(self, name: str) -> str:
        return os.path.join(self.storage_dir, name.lower().replace(" ", "_") + ".yaml")

    def save_result(self, name: str, data: Any) -> str:
        """
        Save a result to storage.

        Returns:
            Filepath of the saved result
        """
        filepath = self._path(name)
        with open(filepath, "w") as f:
            yaml.safe_dump(data, f, default_flow_style=None, sort_keys=False)
        logger.info(f"saved result {name} to {filepath}")
        return filepath

    def load_result(self, name_or_path: str) -> Any:
        if os.path.isfile(name_or_path):
            path = name_or_path
        else:
            path = self._path(name_or_path)
            if not os.path.isfile(path):
                raise FileNotFoundError(f"Result not found: {name_or_path}")
        with open(path, "r") as f:
            return yaml.safe_load(f)

    def list_results(self) -> List[str]:
        return sorted(filename[:-5] for filename in os.listdir(self.storage_dir)
                      if filename.endswith(".yaml"))
