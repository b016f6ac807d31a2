import os

SCHEMA_VERSION = 1

# Upper bound on worker processes for trial-parallel sampling
NUM_PROCESSES = max(1, int(os.environ.get('MCK_THREADS', os.cpu_count() or 1)))
