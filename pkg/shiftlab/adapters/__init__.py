# Adapters for shiftlab (Django, etc.)
