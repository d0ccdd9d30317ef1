var lib = require('./lib');
lib.noop();
