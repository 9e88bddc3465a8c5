# Copyright 2025 John Brosnihan
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Flow file storage.

Flows are persisted as JSON documents validated by FlowDocument. Writes go
to a temporary file in the target directory followed by os.replace, so a
reader never sees a half-written flow. Each verification run is appended to
the flow's manifest with a UTC timestamp.
"""

import os
import tempfile
import threading
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Union

from pydantic import ValidationError

from eulerflow.algebra.padic import InvalidContext, PAdicContext, PAdicError
from eulerflow.algebra.poly import SPACE_VARIABLES, MultiPoly, PolynomialError
from eulerflow.logging import StructuredLogger
from eulerflow.models import (
    FlowDocument,
    LocalizedDocument,
    ManifestEntry,
    PolynomialDocument,
)
from eulerflow.services.arithmetic_flow import FlowDescriptor
from eulerflow.services.geometry import InvalidParameters, SystemParams
from eulerflow.services.localized import LocalizedElement, LocalizedRing, localized_ring

logger = StructuredLogger(__name__)

DEFAULT_FLOW_FILENAME = "flow.json"


class FlowStorageError(Exception):
    """Base exception for flow file storage."""
    pass


class FlowFormatError(FlowStorageError):
    """Raised when a flow file does not describe a valid flow."""
    pass


def utc_timestamp() -> str:
    return datetime.now(timezone.utc).isoformat()


# -- conversions -----------------------------------------------------------------

def poly_to_document(poly: MultiPoly) -> PolynomialDocument:
    return PolynomialDocument(
        variables=list(poly.variables),
        precision=poly.context.N,
        terms=[(list(exps), str(coeff)) for exps, coeff in poly.sorted_terms()],
    )


def document_to_poly(doc: PolynomialDocument, context: PAdicContext) -> MultiPoly:
    if doc.precision != context.N:
        raise FlowFormatError(f"polynomial stored at precision {doc.precision}, flow has N={context.N}")
    terms: dict[tuple[int, ...], int] = {}
    for exps, coeff in doc.terms:
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + int(coeff)
    return MultiPoly(doc.variables, context, terms)


def localized_to_document(element: LocalizedElement) -> LocalizedDocument:
    return LocalizedDocument(
        numerator=poly_to_document(element.numerator),
        denominator=list(element.denominator),
    )


def document_to_localized(doc: LocalizedDocument, ring: LocalizedRing) -> LocalizedElement:
    if tuple(doc.numerator.variables) != SPACE_VARIABLES:
        raise FlowFormatError(f"numerator must be over {SPACE_VARIABLES}, got {doc.numerator.variables}")
    numerator = document_to_poly(doc.numerator, ring.context)
    return ring.element(numerator, tuple(doc.denominator))  # type: ignore[arg-type]


def flow_to_document(flow: FlowDescriptor) -> FlowDocument:
    def optional(element: Optional[LocalizedElement]) -> Optional[LocalizedDocument]:
        return localized_to_document(element) if element is not None else None

    return FlowDocument(
        p=flow.p,
        N=flow.precision,
        a=[str(a) for a in flow.params.a],
        lift_mode=flow.lift_mode,  # type: ignore[arg-type]
        delta3=localized_to_document(flow.delta3),
        phi3=localized_to_document(flow.phi3),
        phi1_sq=localized_to_document(flow.phi1_sq),
        phi2_sq=localized_to_document(flow.phi2_sq),
        phi1=optional(flow.phi1),
        phi2=optional(flow.phi2),
        construction=flow.construction,
        manifest=list(flow.manifest),
    )


def document_to_flow(doc: FlowDocument) -> FlowDescriptor:
    """Rebuild a flow from its document without re-running the construction.

    Raises:
        FlowFormatError: If parameters or components are inconsistent
    """
    try:
        context = PAdicContext(doc.p, doc.N)
        params = SystemParams(context, *(context.scalar(int(a)) for a in doc.a))
    except (InvalidContext, InvalidParameters, ValueError) as e:
        raise FlowFormatError(f"invalid flow parameters: {e}") from e
    ring = localized_ring(params)

    def optional(part: Optional[LocalizedDocument]) -> Optional[LocalizedElement]:
        return document_to_localized(part, ring) if part is not None else None

    try:
        parts = {
            name: document_to_localized(getattr(doc, name), ring)
            for name in ("delta3", "phi3", "phi1_sq", "phi2_sq")
        }
        phi1, phi2 = optional(doc.phi1), optional(doc.phi2)
    except (PolynomialError, PAdicError, ValueError) as e:
        raise FlowFormatError(f"invalid flow component: {e}") from e

    return FlowDescriptor(
        params=params,
        phi1=phi1,
        phi2=phi2,
        **parts,
        lift_mode=doc.lift_mode,
        construction=dict(doc.construction),
        manifest=tuple(doc.manifest),
    )


# -- file store ------------------------------------------------------------------

class FlowStore:
    """Reads and writes flow files under one directory.

    Example:
        >>> store = FlowStore(Path("out"))
        >>> path = store.save(flow)
        >>> flow = store.load(path)
    """

    def __init__(self, directory: Union[str, Path]):
        self.directory = Path(directory).resolve()
        self._lock = threading.Lock()

    def path_for(self, name: Union[str, Path, None] = None) -> Path:
        if name is None:
            return self.directory / DEFAULT_FLOW_FILENAME
        path = Path(name)
        return path if path.is_absolute() else self.directory / path

    def _write_atomic(self, path: Path, text: str) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as f:
                f.write(text)
            os.replace(tmp_name, path)
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise

    def save(self, flow: FlowDescriptor, name: Union[str, Path, None] = None) -> Path:
        """Write ``flow`` atomically and return the path."""
        path = self.path_for(name)
        document = flow_to_document(flow)
        with self._lock:
            self._write_atomic(path, document.model_dump_json(indent=2, by_alias=True))
        logger.info("Flow saved", path=str(path), p=flow.p, precision=flow.precision)
        return path

    def load_document(self, name: Union[str, Path, None] = None) -> FlowDocument:
        """Read and validate a flow document.

        Raises:
            FlowStorageError: If the file is missing
            FlowFormatError: If the JSON does not validate
        """
        path = self.path_for(name)
        try:
            text = path.read_text(encoding="utf-8")
        except FileNotFoundError as e:
            raise FlowStorageError(f"flow file not found: {path}") from e
        try:
            return FlowDocument.model_validate_json(text)
        except ValidationError as e:
            logger.error("Flow file failed validation", path=str(path), error_count=e.error_count())
            raise FlowFormatError(f"invalid flow file {path}: {e}") from e

    def load(self, name: Union[str, Path, None] = None) -> FlowDescriptor:
        flow = document_to_flow(self.load_document(name))
        logger.debug("Flow loaded", path=str(self.path_for(name)), roots=flow.has_roots)
        return flow

    def append_manifest(
        self, results: list[tuple[str, str]], name: Union[str, Path, None] = None
    ) -> FlowDocument:
        """Record (check, status) pairs against the stored flow."""
        path = self.path_for(name)
        with self._lock:
            document = self.load_document(name)
            stamp = utc_timestamp()
            document.manifest.extend(
                ManifestEntry(check=check, status=status, timestamp=stamp)  # type: ignore[arg-type]
                for check, status in results
            )
            self._write_atomic(path, document.model_dump_json(indent=2, by_alias=True))
        logger.debug("Manifest updated", path=str(path), entries=len(results))
        return document
