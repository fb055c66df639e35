"""Face-mask tweet sentiment pipeline: corpus filtering, rule-based sentiment,
demographic attribution, LDA topics and penalized change-point detection."""

__version__ = "0.1.0"
