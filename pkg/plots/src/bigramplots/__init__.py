"""Figure scripts for the bigram scaling-law experiment CSVs.

One script per figure kind, each taking --in CSV --out IMG; all numbers
come from the CSVs, nothing is recomputed here.
"""

__version__ = "0.1.0"
