"""Job files, random instances, batch runs and the command line."""
