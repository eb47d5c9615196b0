import os
from decimal import getcontext

from hypothesis import settings

# the Decimal oracles in the tests rely on 80 significant digits
getcontext().prec = 80

settings.register_profile("default", deadline=None, max_examples=60)
settings.register_profile("thorough", deadline=None, max_examples=400)
settings.load_profile(os.environ.get("ABCLOSURE_HYPOTHESIS", "default"))
