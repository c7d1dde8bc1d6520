"""explicat: mining and annotating pragmatic explicitations in parallel corpora.

Subpackages split along the pipeline: corpus loading and alignments
(`corpus`), candidate mining (`extraction`), the annotation schema
(`schema`), classifiers and features (`models`), query strategies
(`strategies`), the active-learning engine (`engine`), evaluation
(`evalkit`), the annotation HTTP service (`service`), and a synthetic
data generator (`synthetic`).
"""

__version__ = "0.1.0"
