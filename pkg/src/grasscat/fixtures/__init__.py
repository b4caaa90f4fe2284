"""Golden tube data for the tame parameter pairs."""
