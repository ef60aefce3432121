r'''## Here bin "executables"!

Command line scripts:
  * script_condsym
'''
