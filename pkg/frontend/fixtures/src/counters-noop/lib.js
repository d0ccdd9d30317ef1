exports.noop = function () { return null; };
