"""Bundled phrase lists backing the offline keyword extractors.

These are small dictionary-matching stand-ins for trained NER models: the
general list holds everyday named entities (places, organizations, people),
the specialized list holds clinical and scientific terms.  The vocabulary
sizes used for the threshold ratio stay at the extractor defaults, which
describe the full models these lists stand in for, not the list lengths.
"""

from __future__ import annotations

from udl.keywords import ExtractorKind, GazetteerBackend, KeywordExtractor

GENERAL_PHRASES = (
    "london", "paris", "berlin", "madrid", "rome", "vienna", "tokyo", "osaka",
    "beijing", "shanghai", "delhi", "mumbai", "cairo", "lagos", "nairobi",
    "moscow", "istanbul", "athens", "lisbon", "dublin", "oslo", "stockholm",
    "helsinki", "warsaw", "prague", "budapest", "zurich", "geneva", "amsterdam",
    "brussels", "toronto", "montreal", "chicago", "boston", "seattle", "denver",
    "sydney", "melbourne", "auckland", "singapore", "jakarta", "bangkok",
    "new york", "los angeles", "san francisco", "mexico city", "buenos aires",
    "sao paulo", "rio de janeiro", "cape town", "hong kong", "kuala lumpur",
    "united nations", "world bank", "european union", "red cross",
    "reuters", "bloomberg", "toyota", "siemens", "nestle", "unilever",
    "airbus", "boeing", "samsung", "sony", "volkswagen", "ikea",
    "france", "germany", "spain", "italy", "portugal", "greece", "poland",
    "norway", "sweden", "finland", "denmark", "ireland", "scotland",
    "canada", "brazil", "argentina", "chile", "peru", "egypt", "kenya",
    "india", "china", "japan", "korea", "vietnam", "thailand", "australia",
    "einstein", "newton", "darwin", "curie", "tesla", "edison", "turing",
    "shakespeare", "cervantes", "tolstoy", "dickens", "austen", "kafka",
    "monday", "tuesday", "wednesday", "thursday", "friday",
    "january", "february", "march", "april", "june", "july", "august",
    "september", "october", "november", "december",
)

SPECIALIZED_PHRASES = (
    "ibuprofen", "paracetamol", "aspirin", "metformin", "insulin", "heparin",
    "warfarin", "amoxicillin", "penicillin", "doxycycline", "prednisone",
    "dexamethasone", "remdesivir", "oseltamivir", "atorvastatin", "lisinopril",
    "omeprazole", "salbutamol", "morphine", "ketamine", "propofol", "fentanyl",
    "carcinoma", "lymphoma", "leukemia", "melanoma", "sarcoma", "glioblastoma",
    "hypertension", "hypotension", "tachycardia", "bradycardia", "arrhythmia",
    "ischemia", "thrombosis", "embolism", "aneurysm", "stenosis", "sepsis",
    "pneumonia", "bronchitis", "asthma", "emphysema", "fibrosis", "cirrhosis",
    "hepatitis", "nephritis", "dermatitis", "arthritis", "osteoporosis",
    "diabetes mellitus", "myocardial infarction", "pulmonary embolism",
    "deep vein thrombosis", "chronic kidney disease", "rheumatoid arthritis",
    "mitochondria", "ribosome", "cytokine", "interleukin", "immunoglobulin",
    "antibody", "antigen", "epitope", "lymphocyte", "neutrophil", "macrophage",
    "erythrocyte", "thrombocyte", "hemoglobin", "collagen", "keratin",
    "polymerase", "transcriptase", "kinase", "protease", "ligase", "helicase",
    "nucleotide", "chromosome", "telomere", "plasmid", "genome", "proteome",
    "apoptosis", "angiogenesis", "metastasis", "biopsy", "cytology",
    "histology", "serology", "titration", "chromatography", "spectroscopy",
    "electrophoresis", "centrifugation", "lyophilization", "crystallography",
)


def build_general_extractor(path: str | None = None) -> KeywordExtractor:
    backend = GazetteerBackend.from_file(path) if path else GazetteerBackend(GENERAL_PHRASES)
    return KeywordExtractor(kind=ExtractorKind.GENERAL, backend=backend)


def build_specialized_extractor(path: str | None = None) -> KeywordExtractor:
    backend = GazetteerBackend.from_file(path) if path else GazetteerBackend(SPECIALIZED_PHRASES)
    return KeywordExtractor(kind=ExtractorKind.SPECIALIZED, backend=backend)
