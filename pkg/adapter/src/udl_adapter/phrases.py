"""Phrase lists backing the two entity-count endpoints.

The general list reads like newswire: states, institutions, public figures,
currencies.  The specialized list reads like a clinical abstract.  Both are
deliberately small; the vocabulary sizes reported on the wire describe the
full recognizers these lists stand in for.
"""

GENERAL_ENTITIES = (
    "washington", "brussels", "ottawa", "canberra", "wellington", "pretoria",
    "ankara", "tehran", "riyadh", "baghdad", "damascus", "kabul", "islamabad",
    "hanoi", "manila", "seoul", "pyongyang", "taipei", "havana", "caracas",
    "bogota", "lima", "santiago", "quito", "montevideo", "asuncion",
    "united states", "united kingdom", "new zealand", "south africa",
    "saudi arabia", "south korea", "north korea", "costa rica",
    "european parliament", "security council", "world health organization",
    "international monetary fund", "federal reserve", "supreme court",
    "state department", "white house", "downing street", "wall street",
    "nato", "opec", "unicef", "unesco", "interpol", "fifa", "olympics",
    "microsoft", "google", "amazon", "apple", "intel", "oracle", "netflix",
    "exxon", "chevron", "shell", "gazprom", "aramco", "maersk", "lufthansa",
    "dollar", "euro", "sterling", "yen", "yuan", "rupee", "peso", "rouble",
    "senate", "congress", "parliament", "bundestag", "knesset", "duma",
    "lincoln", "churchill", "roosevelt", "gandhi", "mandela", "bolivar",
    "napoleon", "caesar", "cleopatra", "confucius", "aristotle", "plato",
    "atlantic", "pacific", "mediterranean", "amazon river", "nile", "danube",
    "himalayas", "andes", "sahara", "siberia", "patagonia", "scandinavia",
)

BIOMEDICAL_ENTITIES = (
    "acetaminophen", "naproxen", "diclofenac", "celecoxib", "tramadol",
    "gabapentin", "pregabalin", "duloxetine", "sertraline", "fluoxetine",
    "citalopram", "venlafaxine", "risperidone", "olanzapine", "quetiapine",
    "clozapine", "lithium carbonate", "valproate", "lamotrigine",
    "carbamazepine", "levetiracetam", "phenytoin", "azithromycin",
    "ciprofloxacin", "levofloxacin", "vancomycin", "gentamicin", "rifampin",
    "isoniazid", "ethambutol", "fluconazole", "acyclovir", "zidovudine",
    "lopinavir", "ritonavir", "interferon", "rituximab", "trastuzumab",
    "bevacizumab", "pembrolizumab", "nivolumab", "imatinib", "erlotinib",
    "tamoxifen", "letrozole", "cisplatin", "carboplatin", "paclitaxel",
    "docetaxel", "doxorubicin", "cyclophosphamide", "methotrexate",
    "azathioprine", "cyclosporine", "tacrolimus", "adenocarcinoma",
    "squamous cell carcinoma", "basal cell carcinoma", "osteosarcoma",
    "neuroblastoma", "retinoblastoma", "medulloblastoma", "mesothelioma",
    "myelodysplastic syndrome", "multiple myeloma", "hodgkin lymphoma",
    "atrial fibrillation", "ventricular tachycardia", "heart failure",
    "aortic stenosis", "mitral regurgitation", "endocarditis", "pericarditis",
    "myocarditis", "cardiomyopathy", "atherosclerosis", "hyperlipidemia",
    "hyperglycemia", "hypoglycemia", "ketoacidosis", "hyperthyroidism",
    "hypothyroidism", "adrenal insufficiency", "cushing syndrome",
    "parkinson disease", "alzheimer disease", "multiple sclerosis",
    "amyotrophic lateral sclerosis", "myasthenia gravis", "epilepsy",
    "encephalitis", "meningitis", "hydrocephalus", "neuropathy",
    "glomerulonephritis", "pyelonephritis", "hemodialysis", "transplantation",
    "bronchoscopy", "colonoscopy", "endoscopy", "laparoscopy", "angioplasty",
    "catheterization", "intubation", "tracheostomy", "thoracentesis",
    "hemoglobin a1c", "creatinine clearance", "bilirubin", "troponin",
    "c reactive protein", "erythrocyte sedimentation rate", "lipase",
    "tumor necrosis factor", "epidermal growth factor", "insulin resistance",
)
