from .annotations import Annotation, FormatError, ingest_annotations, org_scores
from .attribution import (PROFILE_COLUMNS, UserInfo, build_profile, build_profiles, load_timelines,
                          load_users, read_profiles, write_profiles)
from .college import (AttributePattern, CollegeModel, DegenerateDataError, fit_college_model,
                      idf_weights, load_attribute_phrases, predict_college, rank_attributes, tfidf,
                      train_college)
from .geo import NATIONAL_MEDIAN_INCOME, GeoTable, LocationResult, income_bracket, locate, metro_class
from .names import (PROFILES, ConfigurationError, NameModel, classify_ethnicity, group_ethnicity,
                    load_profile_groups, parse_name, reference_model)
from .party import PartyDirectory, infer_party
from .profile import UNKNOWN, DemographicProfile, ProfileFilter, parse_filter

__all__ = [
    "Annotation", "FormatError", "ingest_annotations", "org_scores",
    "PROFILE_COLUMNS", "UserInfo", "build_profile", "build_profiles", "load_timelines", "load_users",
    "read_profiles", "write_profiles",
    "AttributePattern", "CollegeModel", "DegenerateDataError", "fit_college_model", "idf_weights",
    "load_attribute_phrases", "predict_college", "rank_attributes", "tfidf", "train_college",
    "NATIONAL_MEDIAN_INCOME", "GeoTable", "LocationResult", "income_bracket", "locate", "metro_class",
    "PROFILES", "ConfigurationError", "NameModel", "classify_ethnicity", "group_ethnicity",
    "load_profile_groups", "parse_name", "reference_model",
    "PartyDirectory", "infer_party",
    "UNKNOWN", "DemographicProfile", "ProfileFilter", "parse_filter",
]
