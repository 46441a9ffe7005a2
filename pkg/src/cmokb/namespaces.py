"""Namespace IRIs shared across the knowledge base."""

CMO = "http://gamaizer.ia/cmo#"

# The bundled knowledge bases and query files bind rdf: to this host
# (no "www", no ".org").  Type triples only join when both sides use the
# same spelling, so the engine follows the data; the validator emits a
# warning when a graph mixes in the W3C spelling instead.
RDF = "http://w3c.org/1999/02/22-rdf-syntax-ns#"
RDF_W3C = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"

RDFS = "http://www.w3.org/2000/01/rdf-schema#"
XSD = "http://www.w3.org/2001/XMLSchema#"

XSD_STRING = XSD + "string"
XSD_INTEGER = XSD + "integer"
XSD_DECIMAL = XSD + "decimal"
XSD_DATE = XSD + "date"
XSD_DURATION = XSD + "duration"

RDF_TYPE = RDF + "type"
RDFS_LABEL = RDFS + "label"
RDFS_SUBCLASS_OF = RDFS + "subClassOf"
RDFS_DOMAIN = RDFS + "domain"
RDFS_RANGE = RDFS + "range"
RDFS_CLASS = RDFS + "Class"

# Prefix table used for canonical serialization and display.
DEFAULT_PREFIXES = {
    "cmo": CMO,
    "rdf": RDF,
    "rdfs": RDFS,
    "xsd": XSD,
}
